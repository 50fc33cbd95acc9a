#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "slicelab/errors.hpp"
#include "slicelab/types.hpp"

namespace slicelab {

inline Eigen::MatrixXd to_eigen(const Matrix01& m) {
    Eigen::MatrixXd a(m.n_rows, m.n_cols);
    for (int i = 0; i < m.n_rows; ++i)
        for (int j = 0; j < m.n_cols; ++j) a(i, j) = m.at(i, j);
    return a;
}

/// Smallest singular value, s_n(M) = inf over unit x of |Mx|_2.
inline double least_singular_value(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw ParameterError("least_singular_value: matrix not square");
    if (!m.allFinite()) throw ParameterError("least_singular_value: non-finite entries");
    if (m.rows() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

inline double least_singular_value(const Matrix01& m) {
    return least_singular_value(to_eigen(m));
}

/// Largest singular value via power iteration on the Gram matrix, with a
/// deterministic start and an iteration cap.
inline double operator_norm(const Eigen::MatrixXd& m, int max_iters = 2000,
                            double rel_tol = 1e-12) {
    if (!m.allFinite()) throw ParameterError("operator_norm: non-finite entries");
    if (m.rows() == 0 || m.cols() == 0) return 0;
    const Eigen::MatrixXd gram =
        (m.rows() <= m.cols()) ? Eigen::MatrixXd(m * m.transpose())
                               : Eigen::MatrixXd(m.transpose() * m);
    const int n = static_cast<int>(gram.rows());
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n);
    // Perturb deterministically so the start is never orthogonal to the top
    // eigenvector in structured cases.
    for (int i = 0; i < n; ++i) v(i) += 1e-3 * (i + 1) / double(n);
    v.normalize();
    double lambda = 0;
    for (int it = 0; it < max_iters; ++it) {
        Eigen::VectorXd w = gram * v;
        double nw = w.norm();
        if (nw == 0) return 0;
        w /= nw;
        double next = w.dot(gram * w);
        if (it > 0 && std::abs(next - lambda) <= rel_tol * std::max(1.0, std::abs(next))) {
            lambda = next;
            break;
        }
        lambda = next;
        v = w;
    }
    return std::sqrt(std::max(0.0, lambda));
}

inline double operator_norm(const Matrix01& m) { return operator_norm(to_eigen(m)); }

/// Euclidean distance from v to span(rows), by modified Gram-Schmidt with a
/// breakdown tolerance: directions shorter than the tolerance (relative to
/// the row norm) are treated as already spanned.
inline double dist_to_rowspan(const RealVector& v, const std::vector<RealVector>& rows,
                              double breakdown_tol = 1e-10) {
    const size_t dim = v.size();
    std::vector<RealVector> basis;
    for (const RealVector& r : rows) {
        if (r.size() != dim) throw ParameterError("dist_to_rowspan: inconsistent dimensions");
        RealVector u = r;
        double orig = norm2(u);
        if (orig == 0) continue;
        for (const RealVector& q : basis) {
            double dot = 0;
            for (size_t i = 0; i < dim; ++i) dot += u[i] * q[i];
            for (size_t i = 0; i < dim; ++i) u[i] -= dot * q[i];
        }
        double nu = norm2(u);
        if (nu <= breakdown_tol * orig) continue;
        for (double& x : u) x /= nu;
        basis.push_back(std::move(u));
    }
    RealVector res = v;
    for (const RealVector& q : basis) {
        double dot = 0;
        for (size_t i = 0; i < dim; ++i) dot += res[i] * q[i];
        for (size_t i = 0; i < dim; ++i) res[i] -= dot * q[i];
    }
    return norm2(res);
}

}  // namespace slicelab
