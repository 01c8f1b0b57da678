#pragma once

#include <functional>
#include <stdexcept>
#include <utility>

namespace spinphonon {

// Spin chain at classically treated, staggered positions x_i = 2ai + (-1)^i delta.
// Energies in units of V_L unless stated otherwise; lengths in units of a.
struct ClassicalParams {
  double j = 1.0;      // photon-mediated coupling strength J (> 0)
  double h = 0.0;      // magnetic field along z (>= 0)
  double l = 2.0;      // interaction range L
  double a = 1.0;      // unit cell length
  double v_l = 1.0;    // external trap depth
  int n_atoms = 0;     // 0 selects the thermodynamic limit; else even atom count
};

struct Couplings {
  double j_strong;  // intra-dimer bond
  double j_weak;    // inter-dimer bond
};

struct TripletFractions {
  double t_strong;
  double t_weak;
};

struct ClassicalSolution {
  double delta_star;       // optimal displacement, units of a
  double energy_per_atom;  // units of V_L
  bool dimerized;          // delta_star above threshold and below E(0)
  double t_strong;
  double t_weak;
};

inline constexpr double kDimerizationThreshold = 1e-4;  // in units of a
inline constexpr double kDeltaTolerance = 1e-6;         // minimizer tolerance, units of a

// J_{S,W}(delta) = J sin^2(k delta) exp(-2(a -/+ delta)/L), k = pi/a.
Couplings couplings(double delta, const ClassicalParams& p);

// Quasiparticle dispersion eps_q = sqrt(J_S^2 + J_W^2 + 2 J_S J_W cos q).
double dispersion(double delta, const ClassicalParams& p, double q);

// Equivalent closed form J e^{-2a/L} sin^2(k delta) sqrt(4 cosh^2(2d/L) + 2(cos q - 1)).
double dispersion_closed_form(double delta, const ClassicalParams& p, double q);

// Ground-state energy per atom at displacement delta:
//   E = (V_L/2) sin^2(k delta/2) - h + (1/N) sum_{q: eps_q > 2h} (2h - eps_q),
// with the q-sum over the N/2 dimer momenta; the thermodynamic limit replaces
// (1/N) sum by (1/4pi) int dq over [-pi, pi].
double energy_per_atom(double delta, const ClassicalParams& p);

// h = 0 interaction energy per atom in closed form,
//   -(2J e^{-2a/L}/pi) sin^2(k delta) cosh(2 delta/L) E(m),
// where E is the complete elliptic integral of the second kind with modulus
// m = sech(2 delta/L). Throws std::domain_error if the modulus leaves [0, 1].
double interaction_energy_h0(double delta, const ClassicalParams& p);

// Same quantity by direct q-integration; the oracle for the elliptic reading.
double interaction_energy_h0_quadrature(double delta, const ClassicalParams& p);

// Triplet fraction of the two-site reduced density matrix for atoms within a
// dimer (strong bond) and across dimers (weak bond). Valid for any h >= 0;
// the delta -> 0, h = 0 limit evaluates to (1/2 + 1/pi)^2.
TripletFractions triplet_fractions(double delta, const ClassicalParams& p);

// Minimize energy_per_atom over delta in [0, a/2): coarse scan plus
// golden-section refinement; delta = 0 kept when it ties or wins.
ClassicalSolution minimize_dimerization(const ClassicalParams& p);

// Smallest J (bisection to 1e-4 V_L) whose minimizer dimerizes at field h.
// Throws std::runtime_error carrying the scanned range when no bracket exists.
double critical_coupling(double h, ClassicalParams p, double j_max = 1024.0);

}  // namespace spinphonon
