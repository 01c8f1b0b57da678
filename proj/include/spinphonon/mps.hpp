#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace spinphonon {

// One MPS site tensor A(a, s, b), stored column-major with the left bond
// fastest: flat = a + s*dl + b*dl*d.
struct SiteTensor {
  Eigen::VectorXd v;
  int dl = 1, d = 1, dr = 1;

  SiteTensor() = default;
  SiteTensor(int dl_, int d_, int dr_) : v(Eigen::VectorXd::Zero(static_cast<long>(dl_) * d_ * dr_)), dl(dl_), d(d_), dr(dr_) {}

  double& at(int a, int s, int b) { return v(a + static_cast<long>(s) * dl + static_cast<long>(b) * dl * d); }
  double at(int a, int s, int b) const { return v(a + static_cast<long>(s) * dl + static_cast<long>(b) * dl * d); }

  Eigen::Map<Eigen::MatrixXd> left() { return {v.data(), dl, static_cast<long>(d) * dr}; }
  Eigen::Map<const Eigen::MatrixXd> left() const { return {v.data(), dl, static_cast<long>(d) * dr}; }
  Eigen::Map<Eigen::MatrixXd> right() { return {v.data(), static_cast<long>(dl) * d, dr}; }
  Eigen::Map<const Eigen::MatrixXd> right() const { return {v.data(), static_cast<long>(dl) * d, dr}; }
};

// Finite MPS with an orthogonality center: tensors left of `center` are
// left-isometries, tensors right of it right-isometries.
struct Mps {
  int n = 0, d = 0;
  int center = 0;
  std::uint64_t seed = 0;
  std::vector<SiteTensor> site;

  int bond_dim(int b) const;  // bond b between sites b-1 and b; 0 and n are 1
  int max_bond() const;
  double norm2() const;       // <psi|psi> by direct contraction
};

// Deterministic random MPS (normalized, center at site 0).
Mps random_mps(int n, int d, int init_bond, std::uint64_t seed);

// Product state |labels[0], labels[1], ...>.
Mps product_mps(int n, int d, const std::vector<int>& labels);

// Move the orthogonality center by QR sweeps; normalizes the center tensor.
void move_center_to(Mps& psi, int target);

// Isometry defect of site i given the center position (max |A^T A - 1|).
double isometry_defect(const Mps& psi, int i);

// Binary checkpoint, little-endian:
//   magic "MPS1" | u32 N | u32 d | u64 seed | (N+1) x u32 bond dims |
//   per site, row-major (a, s, b) complex<double> payload (re, im).
// Tensors are stored right-canonical with the center at site 0.
void save_mps(const Mps& psi, const std::string& path);
Mps load_mps(const std::string& path);

}  // namespace spinphonon
