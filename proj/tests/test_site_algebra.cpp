#include <doctest.h>

#include "spinphonon/site_algebra.hpp"

using namespace spinphonon;
using Eigen::Matrix4d;

TEST_CASE("composite operators from the appendix definitions") {
  const auto& s = SiteAlgebra::instance();

  CHECK((s.tau_z - 0.5 * (s.mz + s.sz)).norm() == 0.0);
  CHECK((s.tau_p - s.mp * s.sp).norm() == 0.0);
  CHECK((s.gamma_z - 0.5 * (s.sz - s.mz)).norm() == 0.0);
  CHECK((s.gamma_p - s.mm * s.sp).norm() == 0.0);

  // tau^z action: -1 on |a,dn>, +1 on |b,up>, 0 elsewhere
  Eigen::Vector4d diag = s.tau_z.diagonal();
  CHECK(diag(0) == -1.0);  // |a,dn>
  CHECK(diag(1) == 0.0);   // |a,up>
  CHECK(diag(2) == 0.0);   // |b,dn>
  CHECK(diag(3) == 1.0);   // |b,up>
}

TEST_CASE("tau and gamma obey the spin algebra and commute mutually") {
  const auto& s = SiteAlgebra::instance();
  auto comm = [](const Matrix4d& a, const Matrix4d& b) -> Matrix4d {
    return a * b - b * a;
  };

  CHECK((comm(s.tau_p, s.tau_m) - s.tau_z).norm() < 1e-15);
  CHECK((comm(s.tau_z, s.tau_p) - 2.0 * s.tau_p).norm() < 1e-15);
  CHECK((comm(s.gamma_p, s.gamma_m) - s.gamma_z).norm() < 1e-15);
  CHECK((comm(s.gamma_z, s.gamma_p) - 2.0 * s.gamma_p).norm() < 1e-15);

  for (const auto* a : {&s.tau_p, &s.tau_m, &s.tau_z})
    for (const auto* b : {&s.gamma_p, &s.gamma_m, &s.gamma_z})
      CHECK(comm(*a, *b).norm() < 1e-15);
}

TEST_CASE("spin and motional factors act on the right slots") {
  const auto& s = SiteAlgebra::instance();
  // sigma^+ |a,dn> = |a,up>, msigma^x |a,dn> = |b,dn>
  Eigen::Vector4d adn = Eigen::Vector4d::Unit(0);
  CHECK((s.sp * adn - Eigen::Vector4d::Unit(1)).norm() == 0.0);
  CHECK((s.mx * adn - Eigen::Vector4d::Unit(2)).norm() == 0.0);
  CHECK((s.sz * adn + adn).norm() == 0.0);
  CHECK((s.mz * adn + adn).norm() == 0.0);
}

TEST_CASE("dense_product_operator embeds and orders local factors") {
  const auto& s = SpinHalfAlgebra::instance();
  // two sites: sz x id
  Eigen::MatrixXd m = dense_product_operator(2, 2, {{0, s.sz}});
  CHECK(m.rows() == 4);
  CHECK(m(0, 0) == -1.0);
  CHECK(m(3, 3) == 1.0);
  // same-site products keep the written order
  Eigen::MatrixXd ab = dense_product_operator(1, 2, {{0, s.sp}, {0, s.sm}});
  Eigen::MatrixXd expect = s.sp * s.sm;
  CHECK((ab - expect).norm() == 0.0);
}
