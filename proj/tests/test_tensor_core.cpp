#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "spinphonon/dmrg.hpp"
#include "spinphonon/ed.hpp"
#include "spinphonon/model_builders.hpp"
#include "spinphonon/mpo.hpp"
#include "spinphonon/mps.hpp"
#include "spinphonon/observables.hpp"
#include "spinphonon/site_algebra.hpp"
#include "spinphonon/xx_chain.hpp"

using namespace spinphonon;

TEST_CASE("random MPS is deterministic under the seed and normalized") {
  const Mps a = random_mps(8, 4, 8, 42);
  const Mps b = random_mps(8, 4, 8, 42);
  const Mps c = random_mps(8, 4, 8, 43);
  REQUIRE(a.n == 8);
  for (int i = 0; i < a.n; ++i) CHECK((a.site[i].v - b.site[i].v).norm() == 0.0);
  bool identical = true;
  for (int i = 0; i < a.n; ++i)
    if ((a.site[i].v - c.site[i].v).norm() > 0) identical = false;
  CHECK_FALSE(identical);
  CHECK(a.norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical form: isometries and gauge moves") {
  Mps psi = random_mps(10, 4, 12, 7);
  for (int i = 1; i < psi.n; ++i) CHECK(isometry_defect(psi, i) < 1e-10);
  move_center_to(psi, 6);
  for (int i = 0; i < psi.n; ++i) CHECK(isometry_defect(psi, i) < 1e-10);
  CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gauge invariance of expectations") {
  Mps psi = random_mps(8, 4, 10, 3);
  const auto& s = SiteAlgebra::instance();
  const double before = expectation(psi, {{3, s.sz}, {5, s.mx}});
  move_center_to(psi, 7);
  const double after = expectation(psi, {{3, s.sz}, {5, s.mx}});
  CHECK(before == doctest::Approx(after).epsilon(1e-10));
}

TEST_CASE("product state expectations") {
  // |a,dn> everywhere: index 0
  const Mps psi = product_mps(6, 4, {0, 0, 0, 0, 0, 0});
  const auto& s = SiteAlgebra::instance();
  CHECK(expectation(psi, {}) == doctest::Approx(1.0));
  for (int i = 0; i < 6; ++i)
    CHECK(expectation(psi, {{i, s.sz}}) == doctest::Approx(-1.0));
  // identity at every site
  CHECK(expectation(psi, {{0, s.id}, {3, s.id}, {5, s.id}}) == doctest::Approx(1.0));
}

TEST_CASE("two-point functions match dense evaluation on a random MPS") {
  const int n = 6;
  Mps psi = random_mps(n, 4, 6, 11);
  const auto& s = SiteAlgebra::instance();

  // dense vector from the MPS
  const long dim = 1L << (2 * n);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dim);
  for (long idx = 0; idx < dim; ++idx) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
    long rest = idx;
    std::vector<int> digits(n);
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = rest % 4;
      rest /= 4;
    }
    for (int i = 0; i < n; ++i) {
      const auto& a = psi.site[i];
      Eigen::MatrixXd slice(a.dl, a.dr);
      for (int r = 0; r < a.dl; ++r)
        for (int c = 0; c < a.dr; ++c) slice(r, c) = a.at(r, digits[i], c);
      acc = acc * slice;
    }
    v(idx) = acc(0, 0);
  }
  CHECK(v.squaredNorm() == doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::MatrixXd zz =
      dense_product_operator(n, 4, {{1, s.sz}, {4, s.sz}});
  const double dense_val = v.dot(zz * v);
  CHECK(expectation(psi, {{1, s.sz}, {4, s.sz}}) ==
        doctest::Approx(dense_val).epsilon(1e-10));

  // two-site RDM triplet overlap vs dense
  const Eigen::MatrixXd rho = two_site_rdm(psi, 2, 3);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  CHECK(es.eigenvalues().minCoeff() > -1e-12);

  // dense reduced density matrix over sites (2,3)
  Eigen::MatrixXd rho_dense = Eigen::MatrixXd::Zero(16, 16);
  for (long idx = 0; idx < dim; ++idx)
    for (long jdx = 0; jdx < dim; ++jdx) {
      // digits: site 0 slowest
      auto dig = [&](long x, int site) {
        for (int i = n - 1; i > site; --i) x /= 4;
        return static_cast<int>(x % 4);
      };
      bool match = true;
      for (int site = 0; site < n && match; ++site)
        if (site != 2 && site != 3 && dig(idx, site) != dig(jdx, site))
          match = false;
      if (!match) continue;
      rho_dense(dig(idx, 2) * 4 + dig(idx, 3), dig(jdx, 2) * 4 + dig(jdx, 3)) +=
          v(idx) * v(jdx);
    }
  CHECK((rho - rho_dense).cwiseAbs().maxCoeff() < 1e-10);

  const double t_mps = triplet_overlap(spin_marginal(rho));
  const double t_dense = triplet_overlap(spin_marginal(rho_dense));
  CHECK(t_mps == doctest::Approx(t_dense).epsilon(1e-10));

  // non-adjacent RDM agrees with dense too
  const Eigen::MatrixXd rho14 = two_site_rdm(psi, 1, 4);
  Eigen::MatrixXd rho14_dense = Eigen::MatrixXd::Zero(16, 16);
  for (long idx = 0; idx < dim; ++idx)
    for (long jdx = 0; jdx < dim; ++jdx) {
      auto dig = [&](long x, int site) {
        for (int i = n - 1; i > site; --i) x /= 4;
        return static_cast<int>(x % 4);
      };
      bool match = true;
      for (int site = 0; site < n && match; ++site)
        if (site != 1 && site != 4 && dig(idx, site) != dig(jdx, site))
          match = false;
      if (!match) continue;
      rho14_dense(dig(idx, 1) * 4 + dig(idx, 4), dig(jdx, 1) * 4 + dig(jdx, 4)) +=
          v(idx) * v(jdx);
    }
  CHECK((rho14 - rho14_dense).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("product RDM is rank one") {
  const Mps psi = product_mps(6, 4, {0, 3, 0, 3, 0, 3});
  const Eigen::MatrixXd rho = two_site_rdm(psi, 2, 3);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho);
  int rank = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > 1e-12) ++rank;
  CHECK(rank == 1);
  CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mpo expectation agrees with dense on the full model") {
  const QuantumParams p = make_params(1.0, 0.7, 4);
  const Mpo mpo = build_full_mpo(p);
  const Mps psi = random_mps(4, 4, 8, 5);

  const DenseModel dm = dense_from_mpo(mpo);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(dm.dim);
  for (long idx = 0; idx < dm.dim; ++idx) {
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(1, 1);
    long rest = idx;
    std::vector<int> digits(4);
    for (int i = 3; i >= 0; --i) {
      digits[i] = rest % 4;
      rest /= 4;
    }
    for (int i = 0; i < 4; ++i) {
      const auto& a = psi.site[i];
      Eigen::MatrixXd slice(a.dl, a.dr);
      for (int r = 0; r < a.dl; ++r)
        for (int c = 0; c < a.dr; ++c) slice(r, c) = a.at(r, digits[i], c);
      acc = acc * slice;
    }
    v(idx) = acc(0, 0);
  }
  CHECK(mpo_expectation(psi, mpo) ==
        doctest::Approx(v.dot(dm.h_dense * v)).epsilon(1e-10));
}

TEST_CASE("dmrg: g = 0 lands on the product state in the first sweep") {
  const QuantumParams p = make_params(0.0, 0.5, 8);
  const Mpo mpo = build_full_mpo(p);
  DmrgConfig cfg;
  cfg.seed = 9;
  auto [psi, rep] = dmrg_ground_state(mpo, cfg);
  REQUIRE(rep.energy_per_sweep.size() >= 1);
  CHECK(rep.energy_per_sweep[0] ==
        doctest::Approx(-8.0 * (1.0 + 0.5)).epsilon(1e-12));
  CHECK(rep.converged);
  CHECK(rep.final_energy == doctest::Approx(-12.0).epsilon(1e-12));
}

TEST_CASE("dmrg matches dense diagonalization on the N = 6 full model") {
  const QuantumParams p = make_params(0.9, 0.4, 6);
  const Mpo mpo = build_full_mpo(p);
  const DenseModel dm = dense_from_mpo(mpo);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dm.h_dense);
  const double e_exact = es.eigenvalues()(0);

  DmrgConfig cfg;
  cfg.seed = 17;
  auto [psi, rep] = dmrg_ground_state(mpo, cfg);
  CHECK(std::abs(rep.final_energy - e_exact) < 1e-8 * std::abs(e_exact));

  // variational monotonicity (no truncation at these sizes)
  for (std::size_t s = 1; s < rep.energy_per_sweep.size(); ++s)
    CHECK(rep.energy_per_sweep[s] <=
          rep.energy_per_sweep[s - 1] + 1e-12 * std::abs(e_exact));

  // magnetization conservation on the eigenstate
  const auto& alg = SiteAlgebra::instance();
  double total = 0.0;
  for (int i = 0; i < 6; ++i) total += expectation(psi, {{i, alg.sz}});
  double total2 = 6.0;  // sum_i (sz_i)^2 = N
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) total2 += expectation(psi, {{i, alg.sz}, {j, alg.sz}});
  CHECK(total2 - total * total < 1e-6);
}

TEST_CASE("dmrg solves the composite-flip chain to free-fermion accuracy") {
  const int n = 30;
  const double g = 1.3, h = 0.7;
  const Mpo mpo = build_hplus_mpo(g, h, 1.0, n);
  DmrgConfig cfg;
  cfg.seed = 23;
  auto [psi, rep] = dmrg_ground_state(mpo, cfg);
  const double exact = XxChain(n, g, h).ground_energy();
  CHECK(rep.converged);
  CHECK(std::abs(rep.final_energy - exact) < 1e-6 * std::abs(exact));
}

TEST_CASE("mps checkpoint round trip") {
  namespace fs = std::filesystem;
  const Mps psi = random_mps(7, 4, 9, 77);
  const std::string path =
      (fs::temp_directory_path() / "spinphonon_test_ckpt.mps").string();
  save_mps(psi, path);
  const Mps back = load_mps(path);
  REQUIRE(back.n == psi.n);
  REQUIRE(back.d == psi.d);
  CHECK(back.seed == psi.seed);
  for (int i = 0; i < psi.n; ++i) {
    REQUIRE(back.site[i].v.size() == psi.site[i].v.size());
    CHECK((back.site[i].v - psi.site[i].v).cwiseAbs().maxCoeff() == 0.0);
  }
  fs::remove(path);
}
