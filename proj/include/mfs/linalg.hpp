#pragma once

// Dense complex linear algebra used by every solver.  Matrices are Eigen's
// column-major MatrixXcd; real systems are embedded with zero imaginary part.

#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "mfs/errors.hpp"

namespace mfs {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

struct ThinSvd {
    CMatrix U;   // m x k
    RVector S;   // k, descending
    CMatrix Vh;  // k x n
};

namespace detail {

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& A, const char* who) {
    if (!A.allFinite()) throw ArgumentError(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace detail

/// A = U diag(S) Vh with k = min(m, n).
inline ThinSvd svd_thin(const CMatrix& A) {
    detail::require_finite(A, "svd_thin");
    if (A.size() == 0) throw ArgumentError("svd_thin: empty matrix");
    Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV().adjoint()};
}

inline RVector singular_values(const CMatrix& A) {
    detail::require_finite(A, "singular_values");
    if (A.size() == 0) throw ArgumentError("singular_values: empty matrix");
    return Eigen::BDCSVD<CMatrix>(A).singularValues();
}

/// Minimum-norm least-squares solution of A x = b (m >= n).
inline CVector lstsq(const CMatrix& A, const CVector& b) {
    if (A.rows() < A.cols())
        throw ArgumentError("lstsq: system is underdetermined (" + std::to_string(A.rows()) +
                            " x " + std::to_string(A.cols()) + ")");
    if (b.size() != A.rows()) throw ArgumentError("lstsq: right-hand side length mismatch");
    detail::require_finite(A, "lstsq");
    detail::require_finite(b, "lstsq");
    return A.completeOrthogonalDecomposition().solve(b);
}

/// sigma_max / sigma_min; +inf once sigma_min underflows relative to sigma_max.
inline double cond2(const CMatrix& A) {
    const RVector s = singular_values(A);
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smax > 0.0)) throw ArgumentError("cond2: zero matrix");
    if (smin < smax * 1e-300) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

}  // namespace mfs
