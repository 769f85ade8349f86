#pragma once

// Log-kernel evaluation and its truncated expansion in scaled harmonic monomials
//
//   log|x - y_j| = -log eps_j
//                  - sum_{m>=1} (eps_j R)^m (z^m e^{-i m a_j} + w^m e^{i m a_j}) / (2m),
//
// with z = x / R, w = conj(z), R = R_Omega and y_j = (1/eps_j)(cos a_j, sin a_j).
// Component order of the monomial vector F is [1, z, ..., z^p, w, ..., w^p].

#include <cmath>
#include <limits>
#include <numbers>

#include "mfs/geometry.hpp"
#include "mfs/linalg.hpp"

namespace mfs {

/// log |x - y|.
inline double log_kernel(Point2 x, Point2 y) {
    const double d = distance(x, y);
    if (!(d > 0.0)) throw NumericalError("log kernel evaluated at coincident points");
    return std::log(d);
}

/// Fundamental solution of -Laplace: -log|x - y| / (2 pi).
inline double phi_kernel(Point2 x, Point2 y) {
    return -log_kernel(x, y) / (2.0 * std::numbers::pi);
}

/// sum_{k>=0} z^k / (a + k), the Hurwitz-Lerch transcendent at s = 1.
inline double hurwitz_lerch_phi1(double z, int a) {
    if (!(z >= 0.0) || !(z < 1.0)) throw NumericalError("hurwitz_lerch_phi1: need 0 <= z < 1");
    if (a < 1) throw ArgumentError("hurwitz_lerch_phi1: need a >= 1");
    // Neumaier summation; terms are positive and decreasing
    double sum = 0.0;
    double carry = 0.0;
    double power = 1.0;
    for (long k = 0;; ++k) {
        const double term = power / (static_cast<double>(a) + static_cast<double>(k));
        const double t = sum + term;
        carry += (std::abs(sum) >= std::abs(term)) ? (sum - t) + term : (term - t) + sum;
        sum = t;
        if (term < 1e-18 * (sum + carry)) break;
        power *= z;
        if (power == 0.0) break;
    }
    return sum + carry;
}

/// Bound on the tail sum_{m>p} q^m / m = q^{p+1} Phi(q, 1, p+1).
inline double truncation_residual(double q, int p) {
    if (q == 0.0) return 0.0;
    return std::pow(q, p + 1) * hurwitz_lerch_phi1(q, p + 1);
}

/// Smallest p0 >= 0 with q^{p0+1} Phi(q, 1, p0+1) <= tol.
inline int truncation_order(double q, double tol = std::numeric_limits<double>::epsilon()) {
    if (!(q < 1.0))
        throw ConstraintError("truncation_order: q = max eps_j R_Omega >= 1, series diverges",
                              1.0 - q);
    if (!(q >= 0.0)) throw ArgumentError("truncation_order: q must be nonnegative");
    if (!(tol > 0.0)) throw ArgumentError("truncation_order: tolerance must be positive");
    int p0 = 0;
    while (truncation_residual(q, p0) > tol) ++p0;
    return p0;
}

/// p = max(p0, ceil((N-1)/2)), so that 2p + 1 >= N.
inline int expansion_degree(int p0, int N) {
    if (p0 < 0) throw ArgumentError("expansion_degree: p0 must be nonnegative");
    if (N < 1) throw ArgumentError("expansion_degree: N must be positive");
    return std::max(p0, N / 2);  // N/2 == ceil((N-1)/2) for N >= 1
}

struct ExpansionSetup {
    double R_Omega = 0.0;
    double q = 0.0;   // max_j eps_j R_Omega
    int p0 = 0;
    int p = 0;
    CMatrix M;        // N x (2p + 1)
    SourceSet sources;
};

/// Builds the N x (2p+1) expansion matrix for a fixed degree p.
inline ExpansionSetup build_M(const SourceSet& sources, double R_Omega, int p) {
    if (sources.size() == 0) throw ArgumentError("build_M: empty source set");
    if (p < 0) throw ArgumentError("build_M: negative degree");
    const ConstraintCheck check = check_source_constraint(sources, R_Omega);
    if (!check.ok)
        throw ConstraintError("sources violate max_j eps_j R_Omega < 1 (margin " +
                                  std::to_string(check.margin) + ")",
                              check.margin);

    const auto N = static_cast<Eigen::Index>(sources.size());
    CMatrix M(N, 2 * p + 1);
    for (Eigen::Index j = 0; j < N; ++j) {
        const double eps = sources.eps(j);
        const double s = eps * R_Omega;
        const double alpha = sources.alpha(j);
        M(j, 0) = -std::log(eps);
        double power = 1.0;
        for (int m = 1; m <= p; ++m) {
            power *= s;
            const complex rot = std::polar(1.0, -m * alpha);
            const double scale = -power / (2.0 * m);
            M(j, m) = scale * rot;
            M(j, p + m) = scale * std::conj(rot);
        }
    }
    return {R_Omega, 1.0 - check.margin, 0, p, std::move(M), sources};
}

/// Chooses p from the truncation rule, then builds M.
inline ExpansionSetup build_expansion(const SourceSet& sources, double R_Omega,
                                      double tol = std::numeric_limits<double>::epsilon()) {
    const ConstraintCheck check = check_source_constraint(sources, R_Omega);
    if (!check.ok)
        throw ConstraintError("sources violate max_j eps_j R_Omega < 1 (margin " +
                                  std::to_string(check.margin) + ")",
                              check.margin);
    const int p0 = truncation_order(1.0 - check.margin, tol);
    const int p = expansion_degree(p0, static_cast<int>(sources.size()));
    ExpansionSetup setup = build_M(sources, R_Omega, p);
    setup.p0 = p0;
    return setup;
}

/// F(x) = [1, z, ..., z^p, w, ..., w^p] with z = x / R_Omega.
inline CVector monomial_vector(Point2 x, double R_Omega, int p) {
    const complex z(x.x / R_Omega, x.y / R_Omega);
    CVector F(2 * p + 1);
    F(0) = 1.0;
    complex zm = 1.0;
    for (int m = 1; m <= p; ++m) {
        zm *= z;
        F(m) = zm;
        F(p + m) = std::conj(zm);
    }
    return F;
}

}  // namespace mfs
