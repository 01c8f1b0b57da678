#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <optional>
#include <vector>

#include "spinphonon/mpo.hpp"

namespace spinphonon {

// Dense/sparse exact-diagonalization oracle for small chains. Site index 0 is
// the slowest digit of the many-body basis index (matching repeated Kronecker
// products H = sum kron(op_0, op_1, ...)).
struct DenseModel {
  int n = 0, d = 0;
  long dim = 0;
  bool is_dense = false;
  Eigen::MatrixXd h_dense;
  Eigen::SparseMatrix<double> h_sparse;
};

inline constexpr long kEdDenseCap = 4096;      // dense matrices up to this dim
inline constexpr long kEdDimCap = 1L << 20;    // 4^10 hard cap

// Exact contraction of an MPO into a matrix (dense below kEdDenseCap, sparse
// above). Throws std::length_error past the 4^10 cap.
DenseModel dense_from_mpo(const Mpo& mpo);

// Product of local operators embedded in the full space; ops are (site, op).
Eigen::MatrixXd dense_product_operator(
    int n, int d, const std::vector<std::pair<int, Eigen::MatrixXd>>& ops);

// Total sigma^z charge of a basis state (sum of +-1 per site); `charge_of`
// maps a local level to its sigma^z eigenvalue.
std::vector<long> sector_indices(int n, int d, int total_sz,
                                 const std::vector<int>& level_charge);

struct GroundState {
  double energy = 0.0;
  Eigen::VectorXd vector;  // in the model's basis (sector basis if restricted)
  std::vector<long> basis; // empty when unrestricted
};

// Lowest eigenpair (dense solver below 4096, Lanczos above). The optional
// sector restricts to total sigma^z = `sector` using `level_charge`.
GroundState ground_state_exact(const DenseModel& m,
                               std::optional<int> sector = std::nullopt,
                               const std::vector<int>& level_charge = {});

// log-log fit of |E_full - E_eff| against g; returns the slope. Throws
// std::runtime_error when an energy difference is below the 1e-12 floor.
struct SwScalingResult {
  double slope = 0.0;
  std::vector<double> deviations;
};
SwScalingResult sw_scaling_check(const std::vector<double>& g_list, double delta,
                                 double chi, double h, int n);

}  // namespace spinphonon
