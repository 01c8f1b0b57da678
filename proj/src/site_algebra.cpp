#include "spinphonon/site_algebra.hpp"

namespace spinphonon {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd dense_product_operator(
    int n, int d, const std::vector<std::pair<int, Eigen::MatrixXd>>& ops) {
  std::vector<Eigen::MatrixXd> local(n, Eigen::MatrixXd::Identity(d, d));
  for (const auto& [site, m] : ops) local[site] = local[site] * m;
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
  for (int i = 0; i < n; ++i) out = kron(out, local[i]);
  return out;
}

namespace {

Eigen::Matrix2d pauli_z() {
  Eigen::Matrix2d m;
  m << -1, 0, 0, 1;  // index 0 is the lower state
  return m;
}

Eigen::Matrix2d raising() {
  Eigen::Matrix2d m;
  m << 0, 0, 1, 0;  // |1><0|
  return m;
}

}  // namespace

SpinHalfAlgebra::SpinHalfAlgebra() {
  id = M2::Identity();
  sz = pauli_z();
  sp = raising();
  sm = sp.transpose();
  sx = sp + sm;
}

const SpinHalfAlgebra& SpinHalfAlgebra::instance() {
  static const SpinHalfAlgebra alg;
  return alg;
}

SiteAlgebra::SiteAlgebra() {
  const Eigen::Matrix2d i2 = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d z = pauli_z();
  const Eigen::Matrix2d p = raising();
  const Eigen::Matrix2d m = p.transpose();

  id = M4::Identity();

  sz = kron(i2, z);
  sp = kron(i2, p);
  sm = kron(i2, m);
  sx = sp + sm;

  mz = kron(z, i2);
  mp = kron(p, i2);
  mm = kron(m, i2);
  mx = mp + mm;

  tau_p = mp * sp;  // |b,up><a,dn|
  tau_m = tau_p.transpose();
  tau_z = 0.5 * (mz + sz);

  gamma_p = mm * sp;  // |a,up><b,dn|
  gamma_m = gamma_p.transpose();
  gamma_z = 0.5 * (sz - mz);
}

const SiteAlgebra& SiteAlgebra::instance() {
  static const SiteAlgebra alg;
  return alg;
}

}  // namespace spinphonon
