#include "spinphonon/xx_chain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spinphonon {

Eigen::VectorXd XxChain::mode_energies() const {
  Eigen::VectorXd e(n);
  for (int m = 1; m <= n; ++m)
    e(m - 1) = 2.0 * (delta + h) + 4.0 * g * std::cos(M_PI * m / (n + 1));
  return e;
}

double XxChain::ground_energy() const {
  const Eigen::VectorXd e = mode_energies();
  double sum = -n * (delta + h);
  for (int m = 0; m < n; ++m)
    if (e(m) < 0.0) sum += e(m);
  return sum;
}

int XxChain::ground_flips() const {
  const Eigen::VectorXd e = mode_energies();
  int f = 0;
  for (int m = 0; m < n; ++m)
    if (e(m) < 0.0) ++f;
  return f;
}

double XxChain::ground_energy_sector(int flips) const {
  if (flips < 0 || flips > n) throw std::out_of_range("flips out of range");
  Eigen::VectorXd e = mode_energies();
  std::sort(e.data(), e.data() + n);
  double sum = -n * (delta + h);
  for (int m = 0; m < flips; ++m) sum += e(m);
  return sum;
}

namespace {

// Indices of the `flips` lowest modes (1-based mode numbers).
std::vector<int> filled_modes(int n, const Eigen::VectorXd& e, int flips) {
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i + 1;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return e(a - 1) < e(b - 1); });
  idx.resize(flips);
  return idx;
}

}  // namespace

Eigen::MatrixXd XxChain::correlation_matrix(int flips) const {
  const Eigen::VectorXd e = mode_energies();
  const auto filled = filled_modes(n, e, flips);
  Eigen::MatrixXd gmat = Eigen::MatrixXd::Zero(n, n);
  const double norm = 2.0 / (n + 1);
  for (int m : filled) {
    Eigen::VectorXd phi(n);
    for (int j = 0; j < n; ++j) phi(j) = std::sin(M_PI * m * (j + 1) / (n + 1));
    gmat += norm * phi * phi.transpose();
  }
  return gmat;
}

Eigen::VectorXd XxChain::tau_z_profile(int flips) const {
  const Eigen::MatrixXd g = correlation_matrix(flips);
  Eigen::VectorXd t(n);
  for (int j = 0; j < n; ++j) t(j) = 2.0 * g(j, j) - 1.0;
  return t;
}

double XxChain::tau_pm_correlator(int i, int j, int flips) const {
  if (i >= j) throw std::invalid_argument("need i < j");
  const Eigen::MatrixXd g = correlation_matrix(flips);
  // <tau^x_i tau^x_j> = det M, M_ab = 2 G(i+a-1, i+b) - delta_{i+a-1, i+b},
  // and <tau^+ tau^-> = <tau^x tau^x>/2 for a number-conserving real state.
  const int r = j - i;
  Eigen::MatrixXd m(r, r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b) {
      const int row = i + a, col = i + b + 1;
      m(a, b) = 2.0 * g(row, col) - (row == col ? 1.0 : 0.0);
    }
  return 0.5 * m.determinant();
}

double XxChain::tau_zz_connected(int i, int j, int flips) const {
  if (i == j) throw std::invalid_argument("need i != j");
  const Eigen::MatrixXd g = correlation_matrix(flips);
  return -4.0 * g(i, j) * g(i, j);
}

double hplus_magnetization(int n, double g, double h, double delta) {
  const XxChain xx(n, g, h, delta);
  return (2.0 * xx.ground_flips() - n) / (2.0 * n);
}

}  // namespace spinphonon
