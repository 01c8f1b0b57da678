#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace spinphonon {

// Local Hilbert space of one trapped atom: two motional bands x two spin states.
// Basis order is fixed to |a,dn>, |a,up>, |b,dn>, |b,up> (index = 2*band + spin)
// and every operator matrix, MPO and the checkpoint format depend on it.
//
// sigma  : Pauli operators on the spin factor
// msigma : Pauli operators on the motional (band) factor, "sigma tilde"
// tau    : composite spin-1/2 on the {|a,dn>, |b,up>} subspace
// gamma  : composite spin-1/2 on the {|a,up>, |b,dn>} subspace
struct SiteAlgebra {
  using M4 = Eigen::Matrix4d;

  M4 id;
  M4 sz, sp, sm, sx;          // spin
  M4 mz, mp, mm, mx;          // motional
  M4 tau_z, tau_p, tau_m;     // composite flips, tau_z|a,dn> = -|a,dn>
  M4 gamma_z, gamma_p, gamma_m;

  SiteAlgebra();

  static const SiteAlgebra& instance();
};

// Spin-only 2x2 operators, used by the effective (spin-chain) models.
struct SpinHalfAlgebra {
  using M2 = Eigen::Matrix2d;
  M2 id, sz, sp, sm, sx;
  SpinHalfAlgebra();
  static const SpinHalfAlgebra& instance();
};

// Kronecker product with the first factor on the slow index, so
// kron(band_op, spin_op) matches the |band,spin> basis order above.
Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// Product of local operators embedded in a d^n-dimensional chain (site 0 is
// the slowest basis digit). `ops` holds (site, d x d matrix) pairs; repeated
// sites multiply in the given order.
Eigen::MatrixXd dense_product_operator(
    int n, int d, const std::vector<std::pair<int, Eigen::MatrixXd>>& ops);

}  // namespace spinphonon
