#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spinphonon {

// Free-fermion solution of the open XX chain
//   H = sum_i (Delta + h) tau^z_i + 2g sum_i (tau^+_i tau^-_{i+1} + h.c.)
// via Jordan-Wigner: single-particle modes phi_m(j) = sqrt(2/(N+1)) sin(pi m j/(N+1))
// with energies eps_m = 2(Delta + h) + 4g cos(pi m/(N+1)).
struct XxChain {
  int n;
  double g, h, delta;

  XxChain(int n_, double g_, double h_, double delta_ = 1.0)
      : n(n_), g(g_), h(h_), delta(delta_) {}

  Eigen::VectorXd mode_energies() const;

  // Ground-state energy (fills all negative modes).
  double ground_energy() const;
  // Lowest energy in the sector with exactly `flips` composite flips.
  double ground_energy_sector(int flips) const;
  // Number of flips in the global ground state.
  int ground_flips() const;

  // <tau^z_j> profile (site index 0-based) with `flips` filled modes.
  Eigen::VectorXd tau_z_profile(int flips) const;

  // One-particle correlation matrix G_ij = <f^dag_i f_j> with `flips` modes.
  Eigen::MatrixXd correlation_matrix(int flips) const;

  // <tau^+_i tau^-_j> for i < j via the Jordan-Wigner string determinant.
  double tau_pm_correlator(int i, int j, int flips) const;

  // Connected <tau^z_i tau^z_j> - <tau^z_i><tau^z_j> = -4 G_ij^2 for i != j.
  double tau_zz_connected(int i, int j, int flips) const;
};

// Magnetization per atom predicted for the composite-flip fluid on a chain of
// n sites: M_z = (2*flips - n) / (2n) at the ground-state filling.
double hplus_magnetization(int n, double g, double h, double delta = 1.0);

}  // namespace spinphonon
