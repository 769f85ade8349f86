// mfs: command-line front end for the solvers and the sweep runner.
//
//   mfs solve --config exp.cfg [--n 200]
//   mfs sweep --config exp.cfg --out table.csv
//   mfs basis --config exp.cfg --n 8 --samples 1000 --out basis.csv
//   mfs fit   --in table.csv --method direct
//
// Exit codes: 0 ok, 2 configuration error, 3 numerical failure, 4 I/O error.

#include <iostream>

#include <CLI11.hpp>

#include "mfs/mfs.hpp"

namespace {

enum ExitCode { ok = 0, config_error = 2, numerical_error = 3, io_error = 4 };

int cmd_solve(const std::string& config_path, std::optional<int> n) {
    const mfs::ExperimentConfig cfg = mfs::load_config(config_path);
    const int N = n ? *n : cfg.n_values.front();
    std::cout << mfs::sweep_csv_header << '\n';
    for (mfs::Method method : cfg.methods) {
        mfs::SweepRow row = mfs::to_row(mfs::solve_problem(cfg.problem(N), method).record);
        if (!cfg.timing) row.runtime_ms = 0.0;
        std::cout << mfs::to_csv_line(row) << '\n';
    }
    return ok;
}

int cmd_sweep(const std::string& config_path, std::string out) {
    const mfs::ExperimentConfig cfg = mfs::load_config(config_path);
    if (out.empty()) out = cfg.output;
    if (out.empty()) throw mfs::ConfigError("no output path: pass --out or set sweep.output");
    const mfs::SweepTable table = mfs::run_sweep(cfg);
    mfs::write_text_file(out, mfs::to_csv(table));
    int status = ok;
    for (const mfs::SweepRow& r : table.rows) {
        if (!r.failed()) continue;
        std::cerr << "mfs: " << mfs::to_string(r.method) << " N=" << r.N << ": " << r.diagnostic
                  << '\n';
        status = numerical_error;
    }
    return status;
}

int cmd_basis(const std::string& config_path, int n, int samples, const std::string& out) {
    const mfs::ExperimentConfig cfg = mfs::load_config(config_path);
    const mfs::Problem pb = cfg.problem(n);
    for (mfs::Method method : cfg.methods) {
        std::filesystem::path path = out;
        if (cfg.methods.size() > 1) path = mfs::detail::with_suffix(path, mfs::to_string(method));
        const mfs::Solution sol = mfs::solve_problem(pb, method);
        for (const auto& written : mfs::emit_basis_samples(sol.model, pb.domain, samples, path))
            std::cout << written.string() << '\n';
    }
    return ok;
}

int cmd_fit(const std::string& in, const std::string& method) {
    const mfs::SweepTable table = mfs::parse_sweep_csv(mfs::read_text_file(in));
    const mfs::GrowthFit fit = mfs::fit_growth_rate(table, mfs::parse_method(method));
    std::cout << "method,slope,intercept,rows\n"
              << method << ',' << mfs::detail::format_number(fit.slope) << ','
              << mfs::detail::format_number(fit.intercept) << ',' << fit.rows_used << '\n';
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Method of fundamental solutions for the 2D Laplace Dirichlet problem"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string in_path;
    std::string method;
    std::optional<int> n;
    int basis_n = 0;
    int samples = 1000;

    auto* solve = app.add_subcommand("solve", "Solve once and print a CSV row per method");
    solve->add_option("--config", config_path, "experiment config")->required();
    solve->add_option("--n", n, "number of sources (default: first sweep value)");

    auto* sweep = app.add_subcommand("sweep", "Run the N sweep and write the table");
    sweep->add_option("--config", config_path, "experiment config")->required();
    sweep->add_option("--out", out_path, "output CSV (default: sweep.output)");

    auto* basis = app.add_subcommand("basis", "Sample basis functions on the boundary");
    basis->add_option("--config", config_path, "experiment config")->required();
    basis->add_option("--n", basis_n, "number of sources")->required()->check(CLI::PositiveNumber);
    basis->add_option("--samples", samples, "samples on the boundary")->check(CLI::Range(2, 1 << 24));
    basis->add_option("--out", out_path, "output CSV")->required();

    auto* fit = app.add_subcommand("fit", "Fit ln cond2 against N");
    fit->add_option("--in", in_path, "sweep table CSV")->required();
    fit->add_option("--method", method, "direct, qr or svd")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*solve) return cmd_solve(config_path, n);
        if (*sweep) return cmd_sweep(config_path, out_path);
        if (*basis) return cmd_basis(config_path, basis_n, samples, out_path);
        if (*fit) return cmd_fit(in_path, method);
    } catch (const mfs::IoError& e) {
        std::cerr << "mfs: " << e.what() << '\n';
        return io_error;
    } catch (const mfs::NumericalError& e) {
        std::cerr << "mfs: " << e.what() << '\n';
        return numerical_error;
    } catch (const mfs::Error& e) {
        std::cerr << "mfs: " << e.what() << '\n';
        return config_error;
    }
    return ok;
}
