#pragma once

// Direct-MFS, MFS-QR and MFS-SVD behind one interface.
//
//   Direct  A_ij = Phi(x_i - y_j)
//   QR      A = F_real(x_i)^T Rt^T, Rt the Hadamard-rescaled R of B = QR
//   SVD     A = [Q_Z | Q_W] V1h^T, V1h the leading right singular vectors of M K
//
// Every backend solves A c = g in the least-squares sense and is evaluated
// anywhere through its Model.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mfs/arnoldi.hpp"
#include "mfs/expansion.hpp"
#include "mfs/geometry.hpp"
#include "mfs/linalg.hpp"

namespace mfs {

enum class Method { direct, qr, svd };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::qr: return "qr";
        case Method::svd: return "svd";
    }
    return {};
}

inline Method parse_method(std::string_view name) {
    if (name == "direct") return Method::direct;
    if (name == "qr") return Method::qr;
    if (name == "svd") return Method::svd;
    throw ConfigError("unknown method '" + std::string(name) + "' (expected direct, qr or svd)");
}

// ---------------------------------------------------------------------------
// Boundary data catalog.

class BoundaryData {
public:
    enum class Kind { x2y3, osc10, harmonic };

    static BoundaryData x2y3() { return BoundaryData(Kind::x2y3, 0); }
    static BoundaryData osc10() { return BoundaryData(Kind::osc10, 0); }
    /// Re((x + iy)^k).
    static BoundaryData harmonic(int k) {
        if (k < 0) throw ArgumentError("harmonic_k needs k >= 0");
        return BoundaryData(Kind::harmonic, k);
    }

    /// `x2y3`, `osc10`, `harmonic_<k>` or `harmonic_k` with the degree given separately.
    static BoundaryData parse(std::string_view name, std::optional<int> k = std::nullopt) {
        if (name == "x2y3") return x2y3();
        if (name == "osc10") return osc10();
        if (name == "harmonic_k") {
            if (!k) throw ConfigError("harmonic_k needs a degree k");
            return harmonic(*k);
        }
        if (name.starts_with("harmonic_")) {
            const std::string digits(name.substr(9));
            if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit))
                return harmonic(std::stoi(digits));
        }
        throw ConfigError("unknown boundary data '" + std::string(name) + "'");
    }

    Kind kind() const { return kind_; }
    int degree() const { return k_; }

    std::string name() const {
        switch (kind_) {
            case Kind::x2y3: return "x2y3";
            case Kind::osc10: return "osc10";
            case Kind::harmonic: return "harmonic_" + std::to_string(k_);
        }
        return {};
    }

    double operator()(Point2 p) const {
        switch (kind_) {
            case Kind::x2y3: return p.x * p.x * p.y * p.y * p.y;
            case Kind::osc10: return std::cos(10.0 * p.x) * std::sin(10.0 * p.y);
            case Kind::harmonic: return std::pow(complex(p.x, p.y), k_).real();
        }
        return 0.0;
    }

    CVector sample(const std::vector<Point2>& points) const {
        CVector g(static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) g(i) = (*this)(points[i]);
        return g;
    }

private:
    BoundaryData(Kind kind, int k) : kind_(kind), k_(k) {}
    Kind kind_;
    int k_;
};

// ---------------------------------------------------------------------------
// Models: everything needed to evaluate a basis away from the collocation points.

struct DirectModel {
    SourceSet sources;
};

struct QrBasis {
    double eps = 0.0;  // sources on the circle of radius 1/eps
    int p = 0;
    RMatrix Rt;        // N x (2p+1), Hadamard-rescaled triangular factor
};

struct SvdBasis {
    CMatrix V1h;  // N x (2p+2)
    RVector S1;   // N
    ArnoldiFactor zfac;
    ArnoldiFactor wfac;
    double R_Omega = 0.0;
    int N = 0;
    int p = 0;
};

using Model = std::variant<DirectModel, QrBasis, SvdBasis>;

// ---------------------------------------------------------------------------
// Direct-MFS.

inline CMatrix assemble_direct(const SourceSet& sources, const CollocationSet& colloc) {
    if (sources.size() == 0) throw ArgumentError("assemble_direct: no sources");
    const auto M = static_cast<Eigen::Index>(colloc.size());
    const auto N = static_cast<Eigen::Index>(sources.size());
    CMatrix A(M, N);
    for (Eigen::Index j = 0; j < N; ++j) {
        for (Eigen::Index i = 0; i < M; ++i) {
            const double d = distance(colloc.points[i], sources[j]);
            if (!(d > 0.0))
                throw NumericalError("assemble_direct: source " + std::to_string(j) +
                                     " coincides with collocation point " + std::to_string(i));
            A(i, j) = -std::log(d) / (2.0 * std::numbers::pi);
        }
    }
    return A;
}

// ---------------------------------------------------------------------------
// MFS-QR.

namespace detail {

/// Harmonic block index of component c in [1, r cos t, r sin t, r^2 cos 2t, ...].
inline int harmonic_block(Eigen::Index c) { return static_cast<int>((c + 1) / 2); }

/// [1, r cos t, r sin t, ..., r^p cos pt, r^p sin pt].
inline RVector real_monomials(Point2 x, int p) {
    RVector F(2 * p + 1);
    F(0) = 1.0;
    const complex z(x.x, x.y);
    complex zm = 1.0;
    for (int m = 1; m <= p; ++m) {
        zm *= z;
        F(2 * m - 1) = zm.real();
        F(2 * m) = zm.imag();
    }
    return F;
}

}  // namespace detail

/// Requires all sources on one origin-centred circle.
inline QrBasis build_qr_basis(const SourceSet& sources, int p) {
    const auto N = static_cast<Eigen::Index>(sources.size());
    if (N == 0) throw ArgumentError("build_qr_basis: no sources");
    if (2 * p + 1 < N) throw ArgumentError("build_qr_basis: need 2p + 1 >= N");
    const double eps = sources.eps(0);
    for (Eigen::Index j = 1; j < N; ++j) {
        if (std::abs(sources.eps(j) - eps) > 1e-12 * eps)
            throw ConfigError("MFS-QR needs all sources on a circle centred at the origin");
    }
    const double log_eps = std::log(eps);
    if (std::abs(log_eps) < 1e-12)
        throw ConfigError("MFS-QR is undefined for a unit source circle (log eps = 0)");

    const Eigen::Index cols = 2 * p + 1;
    RMatrix B(N, cols);
    for (Eigen::Index j = 0; j < N; ++j) {
        const double a = sources.alpha(j);
        B(j, 0) = -1.0;
        for (int m = 1; m <= p; ++m) {
            B(j, 2 * m - 1) = -std::cos(m * a);
            B(j, 2 * m) = -std::sin(m * a);
        }
    }
    Eigen::HouseholderQR<RMatrix> qr(B);
    RMatrix R = qr.matrixQR().topRows(N).triangularView<Eigen::Upper>();

    // d_0 = log eps, d_m = eps^m / m; Rt(k, c) = R(k, c) d_{m(c)} / d_{m(k)}
    std::vector<double> d(p + 1);
    d[0] = log_eps;
    for (int m = 1; m <= p; ++m) d[m] = std::pow(eps, m) / m;
    for (Eigen::Index k = 0; k < N; ++k) {
        const double dk = d[detail::harmonic_block(k)];
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (c < k) continue;  // R is zero there
            R(k, c) *= d[detail::harmonic_block(c)] / dk;
        }
    }
    return {eps, p, std::move(R)};
}

inline CMatrix assemble_qr(const QrBasis& basis, const CollocationSet& colloc) {
    const auto M = static_cast<Eigen::Index>(colloc.size());
    RMatrix F(M, 2 * basis.p + 1);
    for (Eigen::Index i = 0; i < M; ++i)
        F.row(i) = detail::real_monomials(colloc.points[i], basis.p).transpose();
    return (F * basis.Rt.transpose()).cast<complex>();
}

inline CMatrix assemble_qr(const SourceSet& sources, const CollocationSet& colloc, int p) {
    return assemble_qr(build_qr_basis(sources, p), colloc);
}

// ---------------------------------------------------------------------------
// MFS-SVD.

namespace detail {

inline CVector scaled_nodes(const std::vector<Point2>& points, double R_Omega, bool conjugate) {
    CVector z(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i)
        z(i) = complex(points[i].x, conjugate ? -points[i].y : points[i].y) / R_Omega;
    return z;
}

/// q_0 of the W factor is the same constant function as q_0 of the Z factor;
/// merge its column into the Z one and drop it, leaving 2p + 1 columns.
inline CMatrix fold_constant(const CMatrix& M1, int p) {
    CMatrix out(M1.rows(), 2 * p + 1);
    out.leftCols(p + 1) = M1.leftCols(p + 1);
    out.col(0) += M1.col(p + 1);
    out.rightCols(p) = M1.rightCols(p);
    return out;
}

inline void require_distinct(const SourceSet& sources) {
    double scale = 0.0;
    for (const Point2& y : sources.points()) scale = std::max(scale, y.r());
    for (std::size_t a = 0; a < sources.size(); ++a)
        for (std::size_t b = a + 1; b < sources.size(); ++b)
            if (distance(sources[a], sources[b]) <= 1e-12 * scale)
                throw RankError("sources " + std::to_string(a) + " and " + std::to_string(b) +
                                " coincide; the MFS basis is rank deficient");
}

}  // namespace detail

inline SvdBasis build_svd_basis(const ExpansionSetup& setup, const CollocationSet& colloc) {
    const int N = static_cast<int>(setup.sources.size());
    const int p = setup.p;
    if (N < 1) throw ArgumentError("build_svd_basis: no sources");
    if (2 * p + 1 < N) throw ArgumentError("build_svd_basis: need 2p + 1 >= N");
    detail::require_distinct(setup.sources);

    SvdBasis basis;
    basis.zfac = arnoldi_vandermonde(detail::scaled_nodes(colloc.points, setup.R_Omega, false), p);
    basis.wfac = arnoldi_vandermonde(detail::scaled_nodes(colloc.points, setup.R_Omega, true), p);
    const CMatrix M1 = detail::fold_constant(setup.M * build_coupling(basis.zfac, basis.wfac), p);

    // The spectrum of M K decays like that of the Direct-MFS matrix, so trailing
    // singular values sit at roundoff level for large N.  Only the right singular
    // vectors are used; they stay orthonormal regardless.
    ThinSvd svd = svd_thin(M1);
    basis.V1h = std::move(svd.Vh);  // k = min(N, 2p+2) = N rows
    basis.S1 = std::move(svd.S);
    basis.R_Omega = setup.R_Omega;
    basis.N = N;
    basis.p = p;
    return basis;
}

/// [Q_Z | Q_W] V1h^T.  The collocation set must be the one the basis was built on.
inline CMatrix assemble_svd_system(const SvdBasis& basis, const CollocationSet& colloc) {
    const CVector z = detail::scaled_nodes(colloc.points, basis.R_Omega, false);
    if (z.size() != basis.zfac.nodes.size() ||
        (z - basis.zfac.nodes).cwiseAbs().maxCoeff() > 1e-14)
        throw ArgumentError(
            "assemble_svd_system: collocation set differs from the one used to build the basis");
    const int p = basis.p;
    const CMatrix Vt = basis.V1h.transpose();
    return basis.zfac.Q * Vt.topRows(p + 1) + basis.wfac.Q.rightCols(p) * Vt.bottomRows(p);
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace detail {

inline constexpr Eigen::Index eval_chunk = 1024;

inline CMatrix basis_block(const DirectModel& m, const std::vector<Point2>& pts,
                           std::size_t begin, std::size_t end) {
    const auto N = static_cast<Eigen::Index>(m.sources.size());
    CMatrix B(static_cast<Eigen::Index>(end - begin), N);
    for (std::size_t i = begin; i < end; ++i)
        for (Eigen::Index j = 0; j < N; ++j) B(i - begin, j) = phi_kernel(pts[i], m.sources[j]);
    return B;
}

inline CMatrix basis_block(const QrBasis& m, const std::vector<Point2>& pts, std::size_t begin,
                           std::size_t end) {
    RMatrix F(static_cast<Eigen::Index>(end - begin), 2 * m.p + 1);
    for (std::size_t i = begin; i < end; ++i)
        F.row(i - begin) = real_monomials(pts[i], m.p).transpose();
    return (F * m.Rt.transpose()).cast<complex>();
}

inline CMatrix basis_block(const SvdBasis& m, const std::vector<Point2>& pts, std::size_t begin,
                           std::size_t end) {
    const std::vector<Point2> sub(pts.begin() + begin, pts.begin() + end);
    const CMatrix Jz = eval_orthobasis(m.zfac, scaled_nodes(sub, m.R_Omega, false));
    const CMatrix Jw = eval_orthobasis(m.wfac, scaled_nodes(sub, m.R_Omega, true));
    const CMatrix Vt = m.V1h.transpose();
    return Jz * Vt.topRows(m.p + 1) + Jw.rightCols(m.p) * Vt.bottomRows(m.p);
}

}  // namespace detail

/// Basis functions at `points`: one row per point, one column per basis function.
inline CMatrix basis_values(const Model& model, const std::vector<Point2>& points) {
    return std::visit(
        [&](const auto& m) { return detail::basis_block(m, points, 0, points.size()); }, model);
}

/// Complex values sum_n c_n phi_n(x) at many points, evaluated in chunks.
inline CVector evaluate_complex(const Model& model, const CVector& coefficients,
                                const std::vector<Point2>& points) {
    CVector out(static_cast<Eigen::Index>(points.size()));
    for (std::size_t begin = 0; begin < points.size();
         begin += static_cast<std::size_t>(detail::eval_chunk)) {
        const std::size_t end =
            std::min(points.size(), begin + static_cast<std::size_t>(detail::eval_chunk));
        const CMatrix B = std::visit(
            [&](const auto& m) { return detail::basis_block(m, points, begin, end); }, model);
        out.segment(static_cast<Eigen::Index>(begin), static_cast<Eigen::Index>(end - begin)) =
            B * coefficients;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solve records.

struct SolveRecord {
    Method method = Method::svd;
    int N = 0;
    int M = 0;
    int p = 0;
    CVector coefficients;
    double cond2 = 0.0;
    double linf_boundary_error = 0.0;
    double max_imag_on_boundary = 0.0;
    double runtime_ms = 0.0;
    double constraint_margin = 0.0;
};

namespace detail {

inline SolveRecord least_squares_record(Method method, const CMatrix& A, const CVector& g) {
    if (A.cols() == 0) throw ArgumentError("solve: N = 0");
    const auto start = std::chrono::steady_clock::now();
    SolveRecord rec;
    rec.method = method;
    rec.N = static_cast<int>(A.cols());
    rec.M = static_cast<int>(A.rows());
    rec.coefficients = lstsq(A, g);
    rec.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rec.cond2 = cond2(A);
    return rec;
}

}  // namespace detail

inline SolveRecord solve_direct(const CMatrix& A, const CVector& g) {
    return detail::least_squares_record(Method::direct, A, g);
}

inline SolveRecord solve_qr(const CMatrix& A, const CVector& g) {
    return detail::least_squares_record(Method::qr, A, g);
}

inline SolveRecord solve_svd(const SvdBasis& basis, const CMatrix& A, const CVector& g) {
    if (A.cols() != basis.N) throw ArgumentError("solve_svd: system width differs from basis size");
    SolveRecord rec = detail::least_squares_record(Method::svd, A, g);
    rec.p = basis.p;
    return rec;
}

/// u(x); for complex-valued bases the real part.
inline double evaluate_solution(const SolveRecord& record, const Model& model, Point2 x) {
    return evaluate_complex(model, record.coefficients, {x})(0).real();
}

struct BoundaryErrorReport {
    double linf = 0.0;      // max |Re u - g|
    double max_imag = 0.0;  // max |Im u|
    double g_max = 0.0;     // max |g|
};

inline BoundaryErrorReport boundary_error(const SolveRecord& record, const Model& model,
                                          const BoundaryCurve& curve, const BoundaryData& g,
                                          int samples = 10001) {
    if (samples < 1) throw ArgumentError("boundary_error: need at least one sample");
    const CollocationSet pts = sample_collocation(curve, samples);
    const CVector u = evaluate_complex(model, record.coefficients, pts.points);
    BoundaryErrorReport rep;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double gi = g(pts.points[i]);
        rep.linf = std::max(rep.linf, std::abs(u(i).real() - gi));
        rep.max_imag = std::max(rep.max_imag, std::abs(u(i).imag()));
        rep.g_max = std::max(rep.g_max, std::abs(gi));
    }
    return rep;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline.

struct Problem {
    BoundaryCurve domain;
    BoundaryCurve source_curve;
    BoundaryData data = BoundaryData::x2y3();
    int N = 0;
    int m_factor = 2;  // M = m_factor * N collocation points
    double tolerance = std::numeric_limits<double>::epsilon();
    int error_samples = 10001;
};

struct Solution {
    SolveRecord record;
    Model model;
    CollocationSet collocation;
};

/// Builds, solves and measures one (problem, method) pair.
///
/// MFS-SVD needs at least p + 1 collocation points for the degree-p Arnoldi
/// factorization; when m_factor * N is smaller, M is raised to p + 1.
inline Solution solve_problem(const Problem& pb, Method method) {
    if (pb.N < 1) throw ArgumentError("N must be positive");
    if (pb.m_factor < 1) throw ArgumentError("the collocation factor must be positive");
    const auto start = std::chrono::steady_clock::now();

    const double R_Omega = compute_R_Omega(pb.domain);
    const SourceSet sources = sample_sources(pb.source_curve, pb.N);
    const ConstraintCheck check = check_source_constraint(sources, R_Omega);
    int M = pb.m_factor * pb.N;

    std::optional<Solution> sol;
    switch (method) {
        case Method::direct: {
            CollocationSet colloc = sample_collocation(pb.domain, M);
            const CMatrix A = assemble_direct(sources, colloc);
            SolveRecord rec = solve_direct(A, pb.data.sample(colloc.points));
            sol = Solution{std::move(rec), DirectModel{sources}, std::move(colloc)};
            break;
        }
        case Method::qr: {
            // the expansion is in powers of r, so R_Omega plays no part beyond the degree rule
            if (!check.ok)
                throw ConstraintError("MFS-QR expansion diverges: sources too close (margin " +
                                          std::to_string(check.margin) + ")",
                                      check.margin);
            const int p = expansion_degree(truncation_order(1.0 - check.margin, pb.tolerance), pb.N);
            CollocationSet colloc = sample_collocation(pb.domain, M);
            QrBasis basis = build_qr_basis(sources, p);
            SolveRecord rec = solve_qr(assemble_qr(basis, colloc), pb.data.sample(colloc.points));
            rec.p = p;
            sol = Solution{std::move(rec), std::move(basis), std::move(colloc)};
            break;
        }
        case Method::svd: {
            const ExpansionSetup setup = build_expansion(sources, R_Omega, pb.tolerance);
            M = std::max(M, setup.p + 1);
            CollocationSet colloc = sample_collocation(pb.domain, M);
            SvdBasis basis = build_svd_basis(setup, colloc);
            const CMatrix A = assemble_svd_system(basis, colloc);
            SolveRecord rec = solve_svd(basis, A, pb.data.sample(colloc.points));
            sol = Solution{std::move(rec), std::move(basis), std::move(colloc)};
            break;
        }
    }
    sol->record.constraint_margin = check.margin;
    sol->record.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const BoundaryErrorReport err =
        boundary_error(sol->record, sol->model, pb.domain, pb.data, pb.error_samples);
    sol->record.linf_boundary_error = err.linf;
    sol->record.max_imag_on_boundary = err.max_imag;
    return std::move(*sol);
}

}  // namespace mfs
