#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "spinphonon/classical_dimer.hpp"

using namespace spinphonon;

namespace {

ClassicalParams params(double j, double h = 0.0) {
  ClassicalParams p;
  p.j = j;
  p.h = h;
  return p;
}

// Independent oracle: dense sector-wise diagonalization of the dimerized
// spin chain -J sum_i J_i (sp_i sm_{i+1} + h.c.) + h sum_i sz_i with periodic
// boundaries, and the triplet overlap of the strong-bond reduced state.
struct SpinChainEd {
  int n;
  Eigen::VectorXd couplings;  // bond i couples (i, i+1 mod n)
  double h;

  double ground_energy_and_triplet(double* t_strong) const {
    const long dim = 1L << n;
    double best = 1e300;
    Eigen::VectorXd best_vec;
    // sector-wise dense diagonalization over number of up spins
    for (int ups = 0; ups <= n; ++ups) {
      std::vector<long> basis;
      for (long s = 0; s < dim; ++s)
        if (__builtin_popcountl(s) == ups) basis.push_back(s);
      const long m = static_cast<long>(basis.size());
      std::vector<long> inv(dim, -1);
      for (long i = 0; i < m; ++i) inv[basis[i]] = i;

      Eigen::MatrixXd hm = Eigen::MatrixXd::Zero(m, m);
      for (long i = 0; i < m; ++i) {
        const long s = basis[i];
        hm(i, i) += h * (2.0 * ups - n);
        for (int b = 0; b < n; ++b) {
          const int u = b, v = (b + 1) % n;
          const bool bu = (s >> u) & 1, bv = (s >> v) & 1;
          if (bu != bv) {
            const long s2 = s ^ (1L << u) ^ (1L << v);
            hm(inv[s2], i) += -couplings(b);
          }
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm);
      if (es.eigenvalues()(0) < best) {
        best = es.eigenvalues()(0);
        // triplet overlap on bond (0,1): |T> = (|ud> + |du>)/sqrt2
        const auto& v0 = es.eigenvectors().col(0);
        Eigen::Matrix4d rho = Eigen::Matrix4d::Zero();
        for (long i = 0; i < m; ++i)
          for (long j = 0; j < m; ++j) {
            const long si = basis[i], sj = basis[j];
            if ((si >> 2) != (sj >> 2)) continue;  // other sites must match
            rho((si & 1) * 2 + ((si >> 1) & 1), (sj & 1) * 2 + ((sj >> 1) & 1)) +=
                v0(i) * v0(j);
          }
        const double val = 0.5 * (rho(1, 1) + rho(1, 2) + rho(2, 1) + rho(2, 2));
        if (t_strong) *t_strong = val;
      }
    }
    return best;
  }
};

}  // namespace

TEST_CASE("couplings at zero displacement vanish") {
  const auto [js, jw] = couplings(0.0, params(1.0));
  CHECK(js == 0.0);
  CHECK(jw == 0.0);
}

TEST_CASE("coupling ratio and product identities") {
  const auto p = params(1.3);
  const double delta = 0.5;  // a/2
  const auto [js, jw] = couplings(delta, p);
  CHECK(js / jw == doctest::Approx(std::exp(4.0 * delta / p.l)).epsilon(1e-12));
  // J_S J_W = J^2 sin^4(k delta) e^{-4a/L} for any delta
  for (double d : {0.05, 0.17, 0.33, 0.49}) {
    const auto [a, b] = couplings(d, p);
    const double expect = p.j * p.j * std::pow(std::sin(M_PI * d), 4) *
                          std::exp(-4.0 * p.a / p.l);
    CHECK(a * b == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("dispersion: closed form agrees pointwise") {
  const auto p = params(0.8);
  for (double d : {0.02, 0.1, 0.25, 0.45}) {
    for (int i = 0; i <= 64; ++i) {
      const double q = -M_PI + 2.0 * M_PI * i / 64;
      CHECK(dispersion(d, p, q) ==
            doctest::Approx(dispersion_closed_form(d, p, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dispersion limits") {
  const auto p = params(1.0);
  CHECK(dispersion(0.0, p, 1.0) == 0.0);
  const double d = 0.2;
  const auto [js, jw] = couplings(d, p);
  CHECK(dispersion(d, p, 0.0) == doctest::Approx(js + jw).epsilon(1e-12));
}

TEST_CASE("energy: trivial limits and parity") {
  // delta = 0, h = 0: nothing moves, nothing couples
  CHECK(energy_per_atom(0.0, params(1.0)) == doctest::Approx(0.0).epsilon(1e-14));
  // J = 0, h > 0: exactly -h per atom
  CHECK(energy_per_atom(0.3, params(0.0, 0.4)) ==
        doctest::Approx(0.5 * std::pow(std::sin(0.5 * M_PI * 0.3), 2) - 0.4)
            .epsilon(1e-12));
  // E(delta) is even
  auto p = params(0.9, 0.2);
  for (double d : {0.1, 0.3}) {
    CHECK(energy_per_atom(d, p) ==
          doctest::Approx(energy_per_atom(-d, p)).epsilon(1e-12));
  }
}

TEST_CASE("elliptic closed form matches q-integration to 1e-8") {
  const auto p = params(1.1);
  for (double d = 0.01; d <= 0.401; d += 0.01) {
    const double closed = interaction_energy_h0(d, p);
    const double quad = interaction_energy_h0_quadrature(d, p);
    CHECK(std::abs(closed - quad) < 1e-8);
  }
}

TEST_CASE("energy h=0 interaction equals the closed form") {
  const auto p = params(0.7);
  for (double d : {0.05, 0.15, 0.35}) {
    const double trap = 0.5 * std::pow(std::sin(0.5 * M_PI * d), 2);
    CHECK(std::abs(energy_per_atom(d, p) - trap - interaction_energy_h0(d, p)) <
          1e-8);
  }
}

TEST_CASE("finite-N energy converges to the thermodynamic limit as 1/N") {
  auto p = params(1.2, 0.1);
  const double d = 0.22;
  p.n_atoms = 0;
  const double e_inf = energy_per_atom(d, p);
  double prev_err = 1e300;
  for (int n : {64, 128, 256, 512}) {
    p.n_atoms = n;
    const double err = std::abs(energy_per_atom(d, p) - e_inf);
    CHECK(err < 16.0 / n);  // C/N bound with a generous constant
    CHECK(err < prev_err + 1e-12);
    prev_err = err;
  }
}

TEST_CASE("triplet fractions: XX limit and large dimerization") {
  const auto p = params(1.0);
  const double xx = std::pow(0.5 + 1.0 / M_PI, 2);
  const auto tf0 = triplet_fractions(0.0, p);
  CHECK(tf0.t_strong == doctest::Approx(xx).epsilon(1e-9));
  CHECK(tf0.t_weak == doctest::Approx(xx).epsilon(1e-9));

  // large delta, small L: strong-bond triplet tends to 1
  ClassicalParams tight = p;
  tight.l = 0.25;
  const auto tf = triplet_fractions(0.49, tight);
  CHECK(tf.t_strong > 0.99);
  CHECK(tf.t_weak < 0.5);
}

TEST_CASE("triplet monotonicity in delta at h = 0") {
  const auto p = params(1.0);
  double prev_s = -1.0, prev_w = 2.0;
  for (double d = 0.0; d <= 0.45; d += 0.05) {
    const auto tf = triplet_fractions(d, p);
    CHECK(tf.t_strong >= prev_s - 1e-12);
    CHECK(tf.t_weak <= prev_w + 1e-12);
    prev_s = tf.t_strong;
    prev_w = tf.t_weak;
  }
}

TEST_CASE("triplet fraction matches small-chain exact diagonalization") {
  const auto p = params(1.0);
  const double d = 0.1;
  const auto tf = triplet_fractions(d, p);

  SpinChainEd ed;
  ed.n = 12;
  ed.h = 0.0;
  ed.couplings.resize(12);
  const auto [js, jw] = couplings(d, p);
  for (int b = 0; b < 12; ++b) ed.couplings(b) = (b % 2 == 0) ? js : jw;
  double t_ed = 0.0;
  ed.ground_energy_and_triplet(&t_ed);
  CHECK(tf.t_strong == doctest::Approx(t_ed).epsilon(0.02));
}

TEST_CASE("minimizer: J = 0 stays at the trap center") {
  const auto sol = minimize_dimerization(params(0.0, 0.3));
  CHECK(sol.delta_star == 0.0);
  CHECK_FALSE(sol.dimerized);
}

TEST_CASE("minimizer dimerizes deep in the coupled regime") {
  const auto sol = minimize_dimerization(params(1.5, 0.0));
  CHECK(sol.dimerized);
  CHECK(sol.delta_star > 1e-3);
  CHECK(sol.energy_per_atom <= energy_per_atom(0.0, params(1.5, 0.0)) + 1e-15);
}

TEST_CASE("variational property of the minimizer") {
  for (double j : {0.2, 0.6, 1.1}) {
    for (double h : {0.0, 0.2}) {
      const auto p = params(j, h);
      const auto sol = minimize_dimerization(p);
      CHECK(sol.energy_per_atom <= energy_per_atom(0.0, p) + 1e-14);
    }
  }
}

TEST_CASE("critical coupling: bisection brackets the onset") {
  ClassicalParams p;
  const double jc = critical_coupling(0.0, p);
  CHECK(jc > 0.0);
  p.j = jc - 5e-4;
  CHECK_FALSE(minimize_dimerization(p).dimerized);
  p.j = jc + 5e-4;
  CHECK(minimize_dimerization(p).dimerized);

  // small-delta expansion of the h = 0 energy gives J_crit = e*pi/16 V_L
  CHECK(jc == doctest::Approx(std::exp(1.0) * M_PI / 16.0).epsilon(2e-3));
}

TEST_CASE("critical coupling is nondecreasing in h") {
  ClassicalParams p;
  double prev = 0.0;
  for (double h : {0.0, 0.25, 0.5, 1.0}) {
    const double jc = critical_coupling(h, p);
    CHECK(jc >= prev - 2e-4);
    prev = jc;
  }
}
