#include "spinphonon/dmrg.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "spinphonon/contraction.hpp"
#include "spinphonon/lanczos.hpp"

namespace spinphonon {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using detail::Env;
using detail::TwoSiteOp;

// Local eigensolve: dense for tiny problems, restarted Lanczos otherwise.
LanczosOut solve_local(const TwoSiteOp& op, VectorXd& v, double rel_tol,
                       int max_iter) {
  const long dim = op.dim();
  if (dim <= 96) {
    MatrixXd h(dim, dim);
    VectorXd e = VectorXd::Zero(dim), col(dim);
    for (long j = 0; j < dim; ++j) {
      e(j) = 1.0;
      op.apply(e, col);
      h.col(j) = col;
      e(j) = 0.0;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (h + h.transpose()));
    LanczosOut out;
    out.value = es.eigenvalues()(0);
    v = es.eigenvectors().col(0);
    out.converged = true;
    return out;
  }
  return lanczos_lowest([&](const auto& x, VectorXd& y) { op.apply(x, y); }, v,
                        rel_tol, max_iter);
}

struct TruncationResult {
  double discarded = 0.0;
  int kept = 0;
};

// Split the optimized two-site tensor; returns the discarded weight.
TruncationResult split_two_site(const VectorXd& theta, int dl, int d, int dr,
                                int max_bond, double cutoff, bool move_right,
                                SiteTensor& left_out, SiteTensor& right_out) {
  Eigen::Map<const MatrixXd> m(theta.data(), static_cast<long>(dl) * d,
                               static_cast<long>(d) * dr);
  Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();

  int kept = 0;
  for (int i = 0; i < s.size() && i < max_bond; ++i)
    if (s(i) >= cutoff) ++kept;
  kept = std::max(kept, 1);

  const double total = s.squaredNorm();
  const double keptw = s.head(kept).squaredNorm();
  TruncationResult res{std::max(0.0, total - keptw), kept};

  VectorXd sk = s.head(kept) / std::sqrt(keptw);
  left_out = SiteTensor(dl, d, kept);
  right_out = SiteTensor(kept, d, dr);
  if (move_right) {
    left_out.right() = svd.matrixU().leftCols(kept);
    right_out.left() = sk.asDiagonal() * svd.matrixV().leftCols(kept).transpose();
  } else {
    left_out.right() = svd.matrixU().leftCols(kept) * sk.asDiagonal();
    right_out.left() = svd.matrixV().leftCols(kept).transpose();
  }
  return res;
}

}  // namespace

DmrgReport dmrg_ground_state(const Mpo& h, Mps& psi, const DmrgConfig& cfg) {
  const int n = h.n;
  if (psi.n != n || psi.d != h.d)
    throw std::invalid_argument("dmrg: state/operator shape mismatch");
  if (n < 2) throw std::invalid_argument("dmrg: need at least two sites");

  move_center_to(psi, 0);

  std::vector<Env> lenv(n + 1), renv(n + 1);
  lenv[0] = detail::left_boundary(h.site[0].wl);
  renv[n] = detail::right_boundary(h.site[n - 1].wr);
  for (int p = n - 1; p >= 1; --p)
    renv[p] = detail::update_right(renv[p + 1], psi.site[p], h.site[p]);

  DmrgReport rep;
  double last_energy = 0.0;
  bool have_last = false;

  auto bond_solve = [&](int i, int bond_cap, bool move_right) {
    const auto& a = psi.site[i];
    const auto& b = psi.site[i + 1];
    TwoSiteOp op{&lenv[i], &renv[i + 2], &h.site[i], &h.site[i + 1],
                 a.dl, b.dr, h.d, {}, {}, {}, {}, {}};
    op.alloc();

    VectorXd theta(op.dim());
    Eigen::Map<MatrixXd>(theta.data(), static_cast<long>(a.dl) * a.d,
                         static_cast<long>(b.d) * b.dr)
        .noalias() = a.right() * b.left();

    auto lz = solve_local(op, theta, cfg.lanczos_tol, cfg.lanczos_max_iter);
    if (!lz.converged && cfg.verbose)
      std::fprintf(stderr, "dmrg: local solve at site %d hit iteration cap\n", i);

    SiteTensor na, nb;
    auto tr = split_two_site(theta, a.dl, h.d, b.dr, bond_cap, cfg.svd_cutoff,
                             move_right, na, nb);
    psi.site[i] = std::move(na);
    psi.site[i + 1] = std::move(nb);
    psi.center = move_right ? i + 1 : i;
    rep.truncation_error_max = std::max(rep.truncation_error_max, tr.discarded);
    rep.bond_dim_used = std::max(rep.bond_dim_used, tr.kept);

    if (move_right)
      lenv[i + 1] = detail::update_left(lenv[i], psi.site[i], h.site[i]);
    else
      renv[i + 1] = detail::update_right(renv[i + 2], psi.site[i + 1], h.site[i + 1]);
    return lz.value;
  };

  auto one_sweep = [&](int bond_cap) {
    double e = 0.0;
    for (int i = 0; i <= n - 2; ++i) e = bond_solve(i, bond_cap, true);
    for (int i = n - 2; i >= 0; --i) e = bond_solve(i, bond_cap, false);
    return e;
  };

  auto run_phase = [&](int bond_cap, int sweeps) {
    for (int s = 0; s < sweeps && !rep.converged; ++s) {
      const double e = one_sweep(bond_cap);
      rep.energy_per_sweep.push_back(e);
      ++rep.sweeps_done;
      if (cfg.verbose)
        std::fprintf(stderr, "dmrg: sweep %d  E = %.12f  D = %d\n",
                     rep.sweeps_done, e, rep.bond_dim_used);
      if (have_last &&
          std::abs(e - last_energy) <= cfg.rel_energy_tol * std::abs(e))
        rep.converged = true;
      last_energy = e;
      have_last = true;
    }
  };

  run_phase(cfg.max_bond, cfg.max_sweeps);
  if (!rep.converged) run_phase(cfg.retry_bond, cfg.extra_sweeps);

  rep.final_energy = last_energy;
  move_center_to(psi, 0);
  return rep;
}

std::pair<Mps, DmrgReport> dmrg_ground_state(const Mpo& h, const DmrgConfig& cfg) {
  Mps psi = random_mps(h.n, h.d, cfg.init_bond, cfg.seed);
  DmrgReport rep = dmrg_ground_state(h, psi, cfg);
  return {std::move(psi), std::move(rep)};
}

}  // namespace spinphonon
