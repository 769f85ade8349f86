#pragma once

// Experiment runner: config files, N sweeps, the sweep CSV, growth-rate fits
// and basis-function samples.
//
// Config format (strict; unknown sections or keys are errors):
//
//   # comment
//   [domain]
//   curve = star_kite
//   [sources]
//   curve = circle(radius=2)
//   [data]
//   function = x2y3            # x2y3 | osc10 | harmonic_<k> | harmonic_k (+ k = <int>)
//   [sweep]
//   methods = direct, qr, svd
//   n = 50:50:500              # start:step:stop, or a comma list
//   m_factor = 2
//   tolerance = 2.220446049250313e-16
//   error_samples = 10001
//   seed = 1
//   timing = on
//   output = table.csv

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mfs/solvers.hpp"

namespace mfs {

struct ExperimentConfig {
    std::string domain = "circle(radius=1)";
    std::string sources = "circle(radius=2)";
    std::string data = "x2y3";
    std::optional<int> data_k;
    std::vector<Method> methods{Method::svd};
    std::vector<int> n_values;
    int m_factor = 2;
    double tolerance = std::numeric_limits<double>::epsilon();
    int error_samples = 10001;
    unsigned seed = 1;
    bool timing = true;
    std::string output;

    Problem problem(int N) const {
        return Problem{parse_curve(domain), parse_curve(sources), BoundaryData::parse(data, data_k),
                       N,                   m_factor,             tolerance,
                       error_samples};
    }
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
    T value{};
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end || text.empty())
        throw ConfigError("bad value for " + what + ": '" + text + "'");
    return value;
}

inline std::vector<int> parse_n_values(const std::string& text) {
    std::vector<int> values;
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw ConfigError("n range must be start:step:stop");
        const int start = parse_number<int>(parts[0], "n start");
        const int step = parse_number<int>(parts[1], "n step");
        const int stop = parse_number<int>(parts[2], "n stop");
        if (step <= 0) throw ConfigError("n step must be positive");
        for (int n = start; n <= stop; n += step) values.push_back(n);
    } else {
        for (const auto& item : split(text, ',')) values.push_back(parse_number<int>(item, "n"));
    }
    if (values.empty()) throw ConfigError("n list is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] <= 0) throw ConfigError("n values must be positive");
        if (i > 0 && values[i] <= values[i - 1]) throw ConfigError("n values must be ascending");
    }
    return values;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    bool have_n = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": malformed section header");
            section = detail::trim(std::string_view(line).substr(1, line.size() - 2));
            if (section != "domain" && section != "sources" && section != "data" &&
                section != "sweep")
                throw ConfigError(where + ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        const std::string full = section + "." + key;

        if (full == "domain.curve") {
            parse_curve(value);
            cfg.domain = value;
        } else if (full == "sources.curve") {
            parse_curve(value);
            cfg.sources = value;
        } else if (full == "data.function") {
            cfg.data = value;
        } else if (full == "data.k") {
            cfg.data_k = detail::parse_number<int>(value, full);
        } else if (full == "sweep.methods") {
            cfg.methods.clear();
            for (const auto& m : detail::split(value, ',')) cfg.methods.push_back(parse_method(m));
            if (cfg.methods.empty()) throw ConfigError("method list is empty");
        } else if (full == "sweep.n") {
            cfg.n_values = detail::parse_n_values(value);
            have_n = true;
        } else if (full == "sweep.m_factor") {
            cfg.m_factor = detail::parse_number<int>(value, full);
            if (cfg.m_factor < 1) throw ConfigError("m_factor must be at least 1");
        } else if (full == "sweep.tolerance") {
            cfg.tolerance = detail::parse_number<double>(value, full);
            if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
        } else if (full == "sweep.error_samples") {
            cfg.error_samples = detail::parse_number<int>(value, full);
            if (cfg.error_samples < 1) throw ConfigError("error_samples must be positive");
        } else if (full == "sweep.seed") {
            cfg.seed = detail::parse_number<unsigned>(value, full);
        } else if (full == "sweep.timing") {
            if (value != "on" && value != "off") throw ConfigError("timing must be on or off");
            cfg.timing = value == "on";
        } else if (full == "sweep.output") {
            cfg.output = value;
        } else {
            throw ConfigError(where + ": unknown key '" + key + "'" +
                              (section.empty() ? " outside any section" : " in [" + section + "]"));
        }
    }
    if (!have_n) throw ConfigError("config needs sweep.n");
    BoundaryData::parse(cfg.data, cfg.data_k);  // validate early
    return cfg;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    return parse_config(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Sweep table.

struct SweepRow {
    Method method = Method::svd;
    int N = 0;
    int M = 0;
    int p = 0;
    double cond2 = 0.0;
    double linf_error = 0.0;
    double max_imag = 0.0;
    double runtime_ms = 0.0;
    double constraint_margin = 0.0;
    std::string diagnostic;  // non-empty when the solve failed; not serialized

    bool failed() const { return !diagnostic.empty(); }
};

struct SweepTable {
    std::vector<SweepRow> rows;
};

inline constexpr std::string_view sweep_csv_header =
    "method,N,M,p,cond2,linf_error,max_imag,runtime_ms,constraint_margin";

inline SweepRow to_row(const SolveRecord& rec) {
    return {rec.method, rec.N, rec.M, rec.p, rec.cond2, rec.linf_boundary_error,
            rec.max_imag_on_boundary, rec.runtime_ms, rec.constraint_margin, {}};
}

inline std::string to_csv_line(const SweepRow& r) {
    using detail::format_number;
    return to_string(r.method) + "," + std::to_string(r.N) + "," + std::to_string(r.M) + "," +
           std::to_string(r.p) + "," + format_number(r.cond2) + "," + format_number(r.linf_error) +
           "," + format_number(r.max_imag) + "," + format_number(r.runtime_ms) + "," +
           format_number(r.constraint_margin);
}

inline std::string to_csv(const SweepTable& table) {
    std::string out(sweep_csv_header);
    out += '\n';
    for (const SweepRow& r : table.rows) out += to_csv_line(r) + '\n';
    return out;
}

inline SweepTable parse_sweep_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || detail::trim(line) != sweep_csv_header)
        throw ConfigError("sweep table: missing or unexpected header");
    SweepTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto f = detail::split(line, ',');
        if (f.size() != 9)
            throw ConfigError("sweep table line " + std::to_string(line_no) + ": expected 9 fields");
        SweepRow r;
        r.method = parse_method(f[0]);
        r.N = detail::parse_number<int>(f[1], "N");
        r.M = detail::parse_number<int>(f[2], "M");
        r.p = detail::parse_number<int>(f[3], "p");
        r.cond2 = detail::parse_number<double>(f[4], "cond2");
        r.linf_error = detail::parse_number<double>(f[5], "linf_error");
        r.max_imag = detail::parse_number<double>(f[6], "max_imag");
        r.runtime_ms = detail::parse_number<double>(f[7], "runtime_ms");
        r.constraint_margin = detail::parse_number<double>(f[8], "constraint_margin");
        table.rows.push_back(std::move(r));
    }
    return table;
}

/// Solves every (method, N) pair; rows sorted by (method, N).  A failing solve
/// becomes a row with NaN measurements and a diagnostic; the sweep continues.
inline SweepTable run_sweep(const ExperimentConfig& cfg) {
    if (cfg.methods.empty()) throw ConfigError("method list is empty");
    std::vector<Method> methods = cfg.methods;
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());

    SweepTable table;
    for (Method method : methods) {
        for (int N : cfg.n_values) {
            const Problem pb = cfg.problem(N);
            SweepRow row;
            try {
                row = to_row(solve_problem(pb, method).record);
            } catch (const NumericalError& e) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row = {method, N, 0, 0, nan, nan, nan, nan, nan, e.what()};
                if (const auto* ce = dynamic_cast<const ConstraintError*>(&e))
                    row.constraint_margin = ce->margin();
            }
            if (!cfg.timing) row.runtime_ms = 0.0;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Conditioning growth.

struct GrowthFit {
    double slope = 0.0;
    double intercept = 0.0;
    int rows_used = 0;
};

/// Least-squares line ln(cond2) = intercept + slope N over the rows of `method`
/// with finite cond2 < 1e15.
inline GrowthFit fit_growth_rate(const SweepTable& table, Method method) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (const SweepRow& r : table.rows) {
        if (r.method != method || r.failed()) continue;
        if (!(std::isfinite(r.cond2) && r.cond2 > 0.0 && r.cond2 < 1e15)) continue;
        xs.push_back(r.N);
        ys.push_back(std::log(r.cond2));
    }
    if (xs.size() < 4)
        throw NumericalError("fit_growth_rate: need at least 4 pre-saturation rows for " +
                             to_string(method) + ", have " + std::to_string(xs.size()));
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) throw NumericalError("fit_growth_rate: all rows share one N");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx, static_cast<int>(xs.size())};
}

// ---------------------------------------------------------------------------
// Basis samples.

struct BasisSamples {
    std::vector<double> t;
    CMatrix values;  // samples x N
};

/// Basis functions sampled at `count` uniform parameters t_i = 2 pi i / count.
inline BasisSamples sample_basis(const Model& model, const BoundaryCurve& curve, int count) {
    if (count < 2) throw ArgumentError("basis samples need count >= 2");
    const CollocationSet pts = sample_collocation(curve, count);
    return {pts.params, basis_values(model, pts.points)};
}

namespace detail {

inline std::string samples_csv(const std::vector<double>& t, const RMatrix& values) {
    std::string out = "t";
    for (Eigen::Index j = 0; j < values.cols(); ++j) out += ",phi" + std::to_string(j + 1);
    out += '\n';
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += format_number(t[i]);
        for (Eigen::Index j = 0; j < values.cols(); ++j)
            out += "," + format_number(values(static_cast<Eigen::Index>(i), j));
        out += '\n';
    }
    return out;
}

inline std::filesystem::path with_suffix(const std::filesystem::path& path, const std::string& tag) {
    std::filesystem::path out = path;
    out.replace_filename(path.stem().string() + "_" + tag + path.extension().string());
    return out;
}

}  // namespace detail

/// Columns scaled to unit max-norm over the samples (zero columns left alone).
inline RMatrix normalize_columns_linf(const RMatrix& values) {
    RMatrix out = values;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        const double m = out.col(j).cwiseAbs().maxCoeff();
        if (m > 0.0) out.col(j) /= m;
    }
    return out;
}

/// Writes basis samples as CSV (columns t, phi1..phiN) and returns the files written.
///
/// Direct-MFS traces are normalized to unit max-norm; MFS-SVD traces are
/// complex and go raw into `<stem>_re` and `<stem>_im` files; MFS-QR traces raw.
inline std::vector<std::filesystem::path> emit_basis_samples(const Model& model,
                                                             const BoundaryCurve& curve, int count,
                                                             const std::filesystem::path& path) {
    const BasisSamples s = sample_basis(model, curve, count);
    if (std::holds_alternative<SvdBasis>(model)) {
        const auto re = detail::with_suffix(path, "re");
        const auto im = detail::with_suffix(path, "im");
        write_text_file(re, detail::samples_csv(s.t, s.values.real()));
        write_text_file(im, detail::samples_csv(s.t, s.values.imag()));
        return {re, im};
    }
    const RMatrix real = s.values.real();
    const RMatrix table =
        std::holds_alternative<DirectModel>(model) ? normalize_columns_linf(real) : real;
    write_text_file(path, detail::samples_csv(s.t, table));
    return {path};
}

}  // namespace mfs
