#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spinphonon/mpo.hpp"
#include "spinphonon/mps.hpp"

namespace spinphonon {

struct DmrgConfig {
  int max_bond = 100;            // D of the first pass
  double rel_energy_tol = 1e-7;  // per-sweep relative energy change
  int max_sweeps = 6;
  int retry_bond = 140;          // escalated D when unconverged
  int extra_sweeps = 6;          // sweeps after escalation
  std::uint64_t seed = 1;        // initial-state seed
  int init_bond = 8;
  double svd_cutoff = 1e-10;     // singular values below this are discarded
  double lanczos_tol = 1e-9;     // relative residual of the local solve
  int lanczos_max_iter = 200;
  bool verbose = false;
};

struct DmrgReport {
  std::vector<double> energy_per_sweep;
  double final_energy = 0.0;
  bool converged = false;
  int bond_dim_used = 0;
  double truncation_error_max = 0.0;
  int sweeps_done = 0;
};

// Two-site ground-state DMRG. Sweeps at D = max_bond until the per-sweep
// relative energy change drops below rel_energy_tol or max_sweeps is hit;
// if unconverged, escalates to retry_bond and continues for extra_sweeps.
// Starts from a seeded random MPS.
std::pair<Mps, DmrgReport> dmrg_ground_state(const Mpo& h, const DmrgConfig& cfg);

// Same, starting from (and overwriting) the given state.
DmrgReport dmrg_ground_state(const Mpo& h, Mps& psi, const DmrgConfig& cfg);

}  // namespace spinphonon
