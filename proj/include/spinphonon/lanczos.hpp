#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace spinphonon {

struct LanczosOut {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

// Lowest eigenpair of a symmetric operator by restarted Lanczos with full
// reorthogonalization. `apply(x, y)` computes y = A x; `v` carries the start
// vector in and the Ritz vector out. Residual target is rel_tol * max(1,|theta|).
template <class Apply>
LanczosOut lanczos_lowest(const Apply& apply, Eigen::VectorXd& v, double rel_tol,
                          int max_iter, int m_max = 30) {
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  const long dim = v.size();
  LanczosOut out;
  m_max = static_cast<int>(std::min<long>(m_max, dim));

  MatrixXd basis(dim, m_max);
  VectorXd alpha(m_max), beta(m_max), w(dim);

  double nrm = v.norm();
  if (nrm == 0.0) {
    v.setOnes();
    nrm = v.norm();
  }
  v /= nrm;

  double theta = 0.0;
  int total_iter = 0;
  const int max_restarts = 2 + max_iter / std::max(1, m_max);
  for (int restart = 0; restart < max_restarts && total_iter < max_iter; ++restart) {
    int k = 0;
    basis.col(0) = v;
    for (; k < m_max && total_iter < max_iter; ++k, ++total_iter) {
      apply(basis.col(k), w);
      alpha(k) = basis.col(k).dot(w);
      w -= alpha(k) * basis.col(k);
      if (k > 0) w -= beta(k - 1) * basis.col(k - 1);
      for (int pass = 0; pass < 2; ++pass)
        w.noalias() -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).transpose() * w);
      beta(k) = w.norm();

      MatrixXd t = MatrixXd::Zero(k + 1, k + 1);
      for (int i = 0; i <= k; ++i) {
        t(i, i) = alpha(i);
        if (i < k) t(i, i + 1) = t(i + 1, i) = beta(i);
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
      theta = es.eigenvalues()(0);
      const double resid = beta(k) * std::abs(es.eigenvectors()(k, 0));
      const double scale = std::max(1.0, std::abs(theta));
      if (resid <= rel_tol * scale || beta(k) <= 1e-14 * scale) {
        v = basis.leftCols(k + 1) * es.eigenvectors().col(0);
        v.normalize();
        out.value = theta;
        out.converged = true;
        out.iterations = total_iter + 1;
        out.residual = resid;
        return out;
      }
      if (k + 1 < m_max) basis.col(k + 1) = w / beta(k);
    }
    MatrixXd t = MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
      t(i, i) = alpha(i);
      if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta(i);
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(t);
    v = basis.leftCols(k) * es.eigenvectors().col(0);
    v.normalize();
    theta = es.eigenvalues()(0);
  }
  out.value = theta;
  out.converged = false;
  out.iterations = total_iter;
  return out;
}

}  // namespace spinphonon
