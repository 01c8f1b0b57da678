#pragma once

#include <Eigen/Dense>
#include <string>

#include "spinphonon/lattice_wannier.hpp"
#include "spinphonon/mpo.hpp"

namespace spinphonon {

// Parameters of the two-band spin-motion chain. Energies are quoted in units
// of the band splitting (delta = 1 by default); eta lengths in units of a.
struct QuantumParams {
  double g = 0.0;
  double h = 0.0;
  double delta = 1.0;
  double eta0 = 0.0;
  double eta_a = 0.0;
  double eta_b = 0.0;
  double l_over_a = 2.0;
  int n = 2;

  double chi() const { return eta_a / (eta0 * l_over_a); }
  double bracket_sum() const {  // (eta_a + eta_b) / (2 L eta0)
    return (eta_a + eta_b) / (2.0 * l_over_a * eta0);
  }
  double bracket_diff() const {  // (eta_b - eta_a) / (2 L eta0)
    return (eta_b - eta_a) / (2.0 * l_over_a * eta0);
  }
};

// Coefficients at the V_L = 20 E_R, L = 2a working point, computed once per
// process from the Wannier pipeline.
const EtaSet& working_point_etas();

QuantumParams make_params(double g, double h, int n);
QuantumParams make_params(double g, double h, int n, const EtaSet& etas,
                          double l_over_a);

// g = J e^{-2a/L} eta0^2 / 2 for a physical coupling J.
double scaled_coupling_from_j(double j, double l_over_a, double eta0);

// Two-band chain
//   H = sum_i [Delta mz_i + h sz_i]
//     + 2g sum_i {mx_i mx_{i+1}
//                 - (1/2L eta0)[(eta_a+eta_b)(mx_i - mx_{i+1})
//                               + (eta_b-eta_a)(mx_i mz_{i+1} - mz_i mx_{i+1})]}
//       * (sp_i sm_{i+1} + h.c.)
// as a nearest-neighbor MPO on local dimension 4.
// `appendix_variant` swaps the cross term for the variant whose second piece
// acts on one site only, (mx_i mz_{i+1} - mx_{i+1} mz_{i+1}).
Mpo build_full_mpo(const QuantumParams& p, bool appendix_variant = false);

// Same Hamiltonian assembled directly as a dense matrix (independent of the
// MPO path; n <= 8).
Eigen::MatrixXd build_full_dense(const QuantumParams& p,
                                 bool appendix_variant = false);

struct EffectiveParams {
  double j1 = 0.0;
  double j2 = 0.0;
  double chi = 0.0;
  double delta = 1.0;
};

// J1 = g^2 (1 + 4 chi^2) / (2 Delta), J2 = g^2 chi^2 / Delta.
EffectiveParams effective_params(double g, double delta, double chi);

// H_eff = -N Delta + sum_i [h sz_i + J1 (sz_i sz_{i+1} - 1)
//                           + 2 J2 (sp_{i-1} sm_{i+1} + h.c.)]
// on local dimension 2.
Mpo build_effective_mpo(const EffectiveParams& ep, double h, int n);

// H+ = sum_i (Delta + h) tau^z_i + 2g sum_i (tau^+_i tau^-_{i+1} + h.c.)
// on the full local dimension 4.
Mpo build_hplus_mpo(double g, double h, double delta, int n);

// Weak-coupling subchain model H_B = sum_i (h - 2 J1) sz_i
//                                    + 2 J2 (sp_i sm_{i+1} + h.c.).
Mpo build_subchain_mpo(const EffectiveParams& ep, double h, int n);

struct WeakCouplingBoundaries {
  double h_lower;  // 2 (J1 - J2)
  double h_upper;  // 2 (J1 + J2)
  double h_crit;   // g^2 / Delta
};
WeakCouplingBoundaries weak_coupling_boundaries(const EffectiveParams& ep,
                                                double g);

// M_z(h) = -1/2 + (1/2pi) arccos((h - 2 J1) / 2 J2), clamped outside the
// gapless window. Throws std::domain_error when J2 = 0 and h != 2 J1.
double magnetization_weak(double h, const EffectiveParams& ep);

// Dense decomposition H = H' + H'' with H' = H+ + H- + H+- the part that
// commutes with O = sum_i mz_i sz_i (n <= 8).
struct CommutingDecomposition {
  Eigen::MatrixXd h_full, h_prime, h_plus, h_minus, h_pm, h_second;
};
CommutingDecomposition decompose_commuting_part(const QuantumParams& p);

// Model descriptor (JSON): {model: full|effective|hplus|subchain_xx, N,
// g_over_Delta, h_over_Delta, eta_source: "file.json" or inline object}.
struct ModelInstance {
  std::string model;
  QuantumParams params;
  Mpo mpo;
};
ModelInstance model_from_descriptor(const std::string& json_text);
ModelInstance make_model(const std::string& model, double g, double h, int n);

}  // namespace spinphonon
