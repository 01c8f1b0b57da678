#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "spinphonon/model_builders.hpp"
#include "spinphonon/mps.hpp"

namespace spinphonon {

// <psi| prod (op at site) |psi> for local operators at distinct sites.
double expectation(const Mps& psi,
                   const std::vector<std::pair<int, Eigen::MatrixXd>>& site_ops);

// Two-site reduced density matrix rho[(s_i, s_j), (s_i', s_j')] with the
// first site on the slow index, plus the spin marginal for d = 4 sites
// (motional factor traced out).
Eigen::MatrixXd two_site_rdm(const Mps& psi, int i, int j);
Eigen::MatrixXd spin_marginal(const Eigen::MatrixXd& rho4);

// <T| rho_spin |T> with |T> = (|up,dn> + |dn,up>)/sqrt(2).
double triplet_overlap(const Eigen::MatrixXd& rho_spin);

// Connected correlators <A_i B_j> - <A_i><B_j> for j = i+1 .. i+range.
Eigen::VectorXd correlation_row(const Mps& psi, int i, const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b, int range);

struct LuttingerFit {
  double k = 0.0;
  double k_err = 0.0;     // propagated from the slope's standard error
  double residual = 0.0;  // rms residual of the log-log fit
  bool valid = false;
  std::string error;      // set when the fit was refused
};

// Fit |C(r)| ~ r^{-1/2K} on r = 1..len(c); requires >= 8 usable points with
// strictly alternating signs and a near-monotone magnitude.
LuttingerFit fit_luttinger_k(const Eigen::VectorXd& c);

struct ObservableSet {
  int n = 0;
  Eigen::VectorXd sz, mz, mx;  // per-site <sigma^z>, <sigma~^z>, <sigma~^x>
  Eigen::VectorXd bond_triplet;

  double m_z = 0.0;            // (1/2N) sum <sigma^z_i>
  int sector = 0;              // rounded total sigma^z
  double sector_residual = 0.0;
  double mag_variance = 0.0;   // <(sum sigma^z)^2> - <sum sigma^z>^2

  double phi = 0.0;            // |staggered <sigma^z>|, central window
  double d_t = 0.0;            // |staggered bond triplet|, central window
  double d_x = 0.0;            // |staggered <sigma~^x>|, central window

  int corr_i0 = 0;
  Eigen::VectorXd c_tau, c_sigma, c_msigma;        // transverse correlators
  Eigen::VectorXd cz_tau, cz_sigma, cz_msigma;     // density correlators
  LuttingerFit k;

  double hplus_profile_dev = 0.0;  // max |<sigma^z> - H+ prediction|, central
  double locking_dev = 0.0;        // max |<sigma^z_i> - <sigma~^z_i>|
  double period2_err = 0.0;
  double period3_err = 0.0;
  double structure_range = 0.0;    // spread of central <sigma^z>
  int flipped_count = 0;           // (sector + n)/2
};

// Full observable pass for a d = 4 state of the two-band models.
// Throws std::invalid_argument when n < 24 (central window undefined).
ObservableSet compute_observables(const Mps& psi, const QuantumParams& p);

enum class Phase { P, N, D, SMF, SMF_CDW, T, U };
std::string phase_name(Phase p);

struct ClassifyContext {
  bool has_scan = false;
  bool kink_flagged = false;              // point sits below the dM/dh kink
  std::optional<int> plateau_sector;      // sector of a detected plateau
};

struct PhaseLabel {
  Phase phase = Phase::U;
  std::string criterion;  // the rule that fired
};

inline constexpr double kNeelThreshold = 0.025;
inline constexpr double kDimerThreshold = 0.01;
inline constexpr double kPeriodTolerance = 0.02;
inline constexpr double kHplusTrackTol = 0.10;

// Appendix-style decision cascade over the order parameters. Throws
// std::invalid_argument when `converged` is false.
PhaseLabel classify_phase(const ObservableSet& obs, bool converged,
                          const ClassifyContext& ctx = {});

}  // namespace spinphonon
