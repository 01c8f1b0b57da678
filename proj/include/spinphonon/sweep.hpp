#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinphonon/dmrg.hpp"
#include "spinphonon/observables.hpp"

namespace spinphonon {

struct Range {
  double start = 0.0, stop = 0.0, step = 1.0;
  int count() const;
  double value(int i) const { return start + i * step; }
};
Range parse_range(const std::string& text);  // "start:stop:step"

struct SweepConfig {
  std::string model = "full";
  Range g_range, h_range;
  int n = 62;
  DmrgConfig dmrg;
  int workers = 1;
  std::string out_dir = "sweep_out";
  bool resume = false;
  std::uint64_t seed = 1;
  bool save_mps = false;
  int max_points = -1;  // testing hook: stop after this many new points

  std::string canonical() const;  // hashed representation
  std::uint64_t hash() const;
};

// One converged (or flagged) grid point.
struct PointRecord {
  double g = 0.0, h = 0.0;
  int n = 0;
  int bond = 0;
  double energy = 0.0;
  bool converged = false;
  double m_z = 0.0;
  double phi = 0.0, d_t = 0.0, d_x = 0.0;
  double k = 0.0, k_residual = 0.0;
  bool k_valid = false;
  std::string phase;
  int flipped_count = 0;
  int sector = 0;
  double hplus_profile_dev = 0.0;
  double locking_dev = 0.0;
  double period3_err = 0.0;
  double structure_range = 0.0;
  double mag_variance = 0.0;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;

  std::string to_json() const;
  static PointRecord from_json(const std::string& text);
};

// Run one (g, h) point: build model, DMRG, observables, classification
// (without scan context). Classification is skipped for n < 24 or d = 2
// models; unconverged runs are flagged, never dropped.
PointRecord run_point(const SweepConfig& cfg, double g, double h,
                      std::optional<std::string> mps_path = std::nullopt);

struct SweepResult {
  std::vector<PointRecord> records;  // row-major over (g, h) grid
  int failed = 0;
  int completed = 0;
  bool finished = false;  // all grid points present
};

// Parallel sweep over the (g, h) grid with atomic per-point files and
// manifest-based resume. After all points complete, phases are reclassified
// with the h-scan context (magnetization kinks, plateau sectors) and the
// aggregate CSV is written.
SweepResult run_sweep(const SweepConfig& cfg);

// Classical-model grid: CSV rows (J/V_L, h/V_L, delta_star/a, E/V_L, T_S, T_W).
std::string classical_grid_csv(double j_max, double h_max, double step);

// Atomic write (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

std::string point_filename(int gi, int hi);
std::uint64_t point_seed(std::uint64_t global_seed, int gi, int hi);

}  // namespace spinphonon
