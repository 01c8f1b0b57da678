#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace spinphonon {

// Sinusoidal trap V(x) = V_L sin^2(k_tr x) with k_tr = k/2 = pi/(2a), so the
// trap period is 2a and site centers sit at nodes of the guided-mode profile
// sin(kx). Internally hbar^2/2m = 1 and a = 1; outputs are quoted in E_R
// (energies, E_R = k_tr^2) and a (lengths).
struct GridSpec {
  int points_per_period = 256;  // spatial samples per trap period
  int periods = 6;              // Wannier domain = [-periods/2, periods/2] trap periods
  int cutoff = 24;              // plane-wave cutoff: modes n in [-cutoff, cutoff]
};

struct LatticeSpec {
  double v_l_over_er = 20.0;
  double l_over_a = 2.0;  // interaction range L
  GridSpec grid;

  double a() const { return 1.0; }
  double k() const { return M_PI; }
  double k_tr() const { return 0.5 * M_PI; }
  double recoil() const { return k_tr() * k_tr(); }
};

struct BandStructure {
  LatticeSpec spec;
  Eigen::VectorXd q;                      // n_q points across the trap BZ
  Eigen::MatrixXd energy;                 // (n_q, n_bands), units of E_R
  std::vector<Eigen::MatrixXd> coeff;     // per q: plane-wave coefficients (2*cutoff+1, n_bands)
};

struct WannierPair {
  Eigen::VectorXd x;         // grid, units of a
  Eigen::VectorXd w_a, w_b;  // real Wannier functions of the two lowest bands
  double dx;
  double eps_a, eps_b;       // on-site energies, units of E_R
  double delta;              // eps_b - eps_a
  double delta_min_gap;      // min over q of E_b(q) - E_a(q), diagnostic
  double t_a, t_b;           // nearest-neighbor tunneling, units of E_R
};

struct EtaSet {
  double eta0;   // dimensionless
  double eta_a;  // units of a
  double eta_b;  // units of a
  double chi;    // eta_a / (eta0 L)
};

struct InteractionCoefficients {
  double v_a, v_b, v_ab, vp_ab, v_3ab, v_3ba;
};

// Plane-wave diagonalization of the trap, lowest n_bands bands on n_q points.
// Verifies convergence by doubling the cutoff; throws std::runtime_error when
// the two lowest bands move by more than 1e-8 E_R.
BandStructure solve_band_structure(const LatticeSpec& spec, int n_bands, int n_q);

// Real, parity-definite Wannier functions of the two lowest bands (w_a even,
// w_b odd about the site center) plus on-site energies and tunnelings.
// Throws std::runtime_error if the phase convention cannot be established.
WannierPair build_wannier(const BandStructure& bands);

// Single-band Wannier function on the band structure's grid.
Eigen::VectorXd build_wannier_band(const BandStructure& bands, int band_index,
                                   Eigen::VectorXd* x_out = nullptr);

// Wannier function of site `site` (centered at 2a*site), by Bloch translation.
Eigen::VectorXd wannier_at_site(const BandStructure& bands, int band_index, int site);

// t_alpha = -<w_{alpha,0}|H|w_{alpha,1}>, evaluated exactly from band energies.
std::pair<double, double> compute_tunneling(const BandStructure& bands);

// eta0 = int sin(kx) w_a w_b; eta_{a,b} = int x sin(kx) w_{a,b}^2;
// w_b's sign is fixed so that eta0 > 0.
EtaSet compute_etas(WannierPair& wp, double l_over_a);

// The five two-body overlap integrals with kernel exp(-|x_i - x_j - x + x'|/L)
// at site separation `separation` (in sites, distance 2a*separation).
InteractionCoefficients compute_interaction_coefficients(const WannierPair& wp,
                                                          double l_over_a,
                                                          int separation);

// Independent real-space check: band energies at one q by 4th-order finite
// differences with Bloch boundary conditions over a single trap period.
Eigen::VectorXd band_energies_fd(const LatticeSpec& spec, double q, int n_bands,
                                 int n_points = 1024);

// Machine-readable coefficient record consumed by the model builders / CLI.
std::string coefficient_record_json(const LatticeSpec& spec, const WannierPair& wp,
                                    const EtaSet& etas);

// Full pipeline at the given working point.
struct WannierResult {
  LatticeSpec spec;
  WannierPair wp;
  EtaSet etas;
};
WannierResult compute_wannier_coefficients(const LatticeSpec& spec);

}  // namespace spinphonon
