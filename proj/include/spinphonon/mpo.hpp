#pragma once

#include <Eigen/Dense>
#include <vector>

namespace spinphonon {

// Matrix product operator in finite-state-machine form. Scalar entries
// W[wl, s_out, s_in, wr] = v; state 0 means "nothing placed yet" and the
// last state means "term complete", so the boundary selectors are e_0 on the
// left and e_{w-1} on the right.
struct MpoEntry {
  int wl, wr, so, si;
  double v;
};

struct MpoSite {
  int wl = 1, wr = 1;
  std::vector<MpoEntry> ent;
};

struct Mpo {
  int n = 0, d = 0;
  std::vector<MpoSite> site;

  int max_bond() const {
    int m = 0;
    for (const auto& s : site) m = std::max({m, s.wl, s.wr});
    return m;
  }
};

// Assembles nearest- and next-nearest-neighbor Hamiltonians. Equal left
// operators of bond terms share one FSM state.
class MpoBuilder {
 public:
  MpoBuilder(int n, int d) : n_(n), d_(d) {}

  void add_onsite(const Eigen::MatrixXd& m);
  // sum_i c * a_i b_{i+1}
  void add_bond(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double c = 1.0);
  // sum_i c * a_i (identity)_{i+1} b_{i+2}
  void add_nnn(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double c = 1.0);
  void add_constant(double c) { constant_ += c; }

  Mpo build() const;

 private:
  int n_, d_;
  Eigen::MatrixXd onsite_ = {};
  double constant_ = 0.0;
  std::vector<Eigen::MatrixXd> bond_left_;
  std::vector<Eigen::MatrixXd> bond_right_;  // accumulated right side per left op
  std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> nnn_;
};

// <psi|H|psi> by direct contraction (no normalization applied).
struct Mps;
double mpo_expectation(const Mps& psi, const Mpo& op);

}  // namespace spinphonon
