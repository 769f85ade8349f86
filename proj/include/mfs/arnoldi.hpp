#pragma once

// Vandermonde with Arnoldi.
//
// For nodes x_1..x_M and degree n, builds Q (M x (n+1), orthonormal columns,
// q_0 = ones / sqrt(M)) and the (n+1) x n Hessenberg H with diag(x) Q_- = Q H.
// The Vandermonde matrix V = [x^0 | ... | x^n] is never formed: its
// coordinates R in the Q basis follow from r_{k+1} = H_k r_k.

#include <cmath>
#include <string>

#include "mfs/linalg.hpp"

namespace mfs {

struct ArnoldiFactor {
    CVector nodes;
    CMatrix Q;  // M x (n+1)
    CMatrix H;  // (n+1) x n, upper Hessenberg
    CMatrix R;  // (n+1) x (n+1), upper triangular, V = Q R
    int degree = 0;
};

inline ArnoldiFactor arnoldi_vandermonde(const CVector& nodes, int n) {
    const Eigen::Index M = nodes.size();
    if (n < 0) throw ArgumentError("arnoldi_vandermonde: negative degree");
    if (n + 1 > M)
        throw RankError("arnoldi_vandermonde: degree " + std::to_string(n) + " needs at least " +
                        std::to_string(n + 1) + " nodes, got " + std::to_string(M));
    if (!nodes.allFinite()) throw ArgumentError("arnoldi_vandermonde: non-finite node");

    ArnoldiFactor f;
    f.nodes = nodes;
    f.degree = n;
    f.Q.resize(M, n + 1);
    f.H = CMatrix::Zero(n + 1, n);
    f.R = CMatrix::Zero(n + 1, n + 1);

    const double scale = std::sqrt(static_cast<double>(M));
    f.Q.col(0).setConstant(1.0 / scale);
    const double breakdown = 1e-14 * nodes.cwiseAbs().maxCoeff();

    CVector v(M);
    for (int k = 0; k < n; ++k) {
        v = nodes.cwiseProduct(f.Q.col(k));
        // modified Gram-Schmidt, then one reorthogonalization sweep
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= k; ++i) {
                const complex h = f.Q.col(i).dot(v);
                v.noalias() -= h * f.Q.col(i);
                f.H(i, k) += h;
            }
        }
        const double norm = v.norm();
        if (!(norm > breakdown))
            throw DegenerateError("arnoldi_vandermonde: breakdown at step " + std::to_string(k + 1) +
                                      " (nodes span fewer than " + std::to_string(k + 2) +
                                      " dimensions)",
                                  k + 1);
        f.H(k + 1, k) = norm;
        f.Q.col(k + 1) = v / norm;
    }

    f.R(0, 0) = scale;
    for (int k = 0; k < n; ++k)
        f.R.col(k + 1).head(k + 2) = f.H.topLeftCorner(k + 2, k + 1) * f.R.col(k).head(k + 1);
    return f;
}

/// Values of the orthogonal basis q_0..q_n at new nodes (one row per node),
/// generated by the same recurrence that built Q.
inline CMatrix eval_orthobasis(const ArnoldiFactor& f, const CVector& new_nodes) {
    const int n = f.degree;
    const Eigen::Index L = new_nodes.size();
    CMatrix out(L, n + 1);
    out.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(f.Q.rows())));
    for (int k = 0; k < n; ++k) {
        const complex sub = f.H(k + 1, k);
        if (sub == 0.0) throw NumericalError("eval_orthobasis: zero subdiagonal in H");
        CVector v = new_nodes.cwiseProduct(out.col(k));
        for (int i = 0; i <= k; ++i) v.noalias() -= f.H(i, k) * out.col(i);
        out.col(k + 1) = v / sub;
    }
    return out;
}

/// K = blkdiag(R_Z, R_W)^T, (2p+1) x (2p+2), where R_W drops the first column
/// of the W factor's R (w^0 is already carried by the Z block).
inline CMatrix build_coupling(const ArnoldiFactor& zfac, const ArnoldiFactor& wfac) {
    if (zfac.degree != wfac.degree)
        throw ArgumentError("build_coupling: Z and W factors have different degrees");
    const int p = zfac.degree;
    CMatrix K = CMatrix::Zero(2 * p + 1, 2 * p + 2);
    K.topLeftCorner(p + 1, p + 1) = zfac.R.transpose();
    K.bottomRightCorner(p, p + 1) = wfac.R.rightCols(p).transpose();
    return K;
}

}  // namespace mfs
