#include "spinphonon/observables.hpp"

#include <cmath>
#include <stdexcept>

#include "spinphonon/contraction.hpp"
#include "spinphonon/site_algebra.hpp"
#include "spinphonon/xx_chain.hpp"

namespace spinphonon {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// <C| O |C> on the center tensor.
double center_expectation(const SiteTensor& c, const MatrixXd& op) {
  double val = 0.0;
  for (int so = 0; so < c.d; ++so)
    for (int si = 0; si < c.d; ++si) {
      if (op(so, si) == 0.0) continue;
      Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> ket(
          c.v.data() + static_cast<long>(si) * c.dl, c.dl, c.dr,
          Eigen::OuterStride<>(static_cast<long>(c.dl) * c.d));
      Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> bra(
          c.v.data() + static_cast<long>(so) * c.dl, c.dl, c.dr,
          Eigen::OuterStride<>(static_cast<long>(c.dl) * c.d));
      val += op(so, si) * bra.cwiseProduct(ket).sum();
    }
  return val;
}

// E'(bk, bb) = sum_t A_t^T E A_t (identity transfer).
MatrixXd fold_identity(const MatrixXd& e, const SiteTensor& a) {
  MatrixXd out = MatrixXd::Zero(a.dr, a.dr);
  for (int t = 0; t < a.d; ++t) {
    Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> at(
        a.v.data() + static_cast<long>(t) * a.dl, a.dl, a.dr,
        Eigen::OuterStride<>(static_cast<long>(a.dl) * a.d));
    out.noalias() += at.transpose() * e * at;
  }
  return out;
}

// E'(bk, bb) = sum_{t,t'} O(t', t) A(:,t,:)^T' ... operator transfer.
MatrixXd fold_operator(const MatrixXd& e, const SiteTensor& a, const MatrixXd& op) {
  MatrixXd out = MatrixXd::Zero(a.dr, a.dr);
  for (int to = 0; to < a.d; ++to)
    for (int ti = 0; ti < a.d; ++ti) {
      if (op(to, ti) == 0.0) continue;
      Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> ket(
          a.v.data() + static_cast<long>(ti) * a.dl, a.dl, a.dr,
          Eigen::OuterStride<>(static_cast<long>(a.dl) * a.d));
      Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> bra(
          a.v.data() + static_cast<long>(to) * a.dl, a.dl, a.dr,
          Eigen::OuterStride<>(static_cast<long>(a.dl) * a.d));
      out.noalias() += op(to, ti) * bra.transpose() * e * ket;
    }
  return out;
}

// Two-site tensor of the bond at the center, as Q[(s,t), (a + b*dl)].
MatrixXd bond_gram_matrix(const Mps& psi, int i) {
  const auto& a = psi.site[i];
  const auto& b = psi.site[i + 1];
  MatrixXd theta(static_cast<long>(a.dl) * a.d, static_cast<long>(b.d) * b.dr);
  theta.noalias() = a.right() * b.left();
  const int d = a.d, dl = a.dl, dr = b.dr;
  MatrixXd q(static_cast<long>(d) * d, static_cast<long>(dl) * dr);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t)
      for (int ai = 0; ai < dl; ++ai)
        for (int bi = 0; bi < dr; ++bi)
          q(s * d + t, ai + static_cast<long>(bi) * dl) =
              theta(ai + static_cast<long>(s) * dl, t + static_cast<long>(bi) * d);
  return q;
}

Mpo total_sz_squared_mpo(int n, int d, const MatrixXd& sz) {
  Mpo m;
  m.n = n;
  m.d = d;
  m.site.resize(n);
  std::vector<MpoEntry> bulk;
  auto put = [&](std::vector<MpoEntry>& ent, int wl, int wr, const MatrixXd& op) {
    for (int so = 0; so < d; ++so)
      for (int si = 0; si < d; ++si)
        if (op(so, si) != 0.0) ent.push_back({wl, wr, so, si, op(so, si)});
  };
  const MatrixXd id = MatrixXd::Identity(d, d);
  put(bulk, 0, 0, id);
  put(bulk, 2, 2, id);
  put(bulk, 0, 1, sz);
  put(bulk, 1, 2, 2.0 * sz);
  for (int i = 0; i < n; ++i) {
    m.site[i].wl = 3;
    m.site[i].wr = 3;
    m.site[i].ent = bulk;
  }
  put(m.site[0].ent, 0, 2, static_cast<double>(n) * id);  // sum_i (sz_i)^2 = N
  return m;
}

double staggered_abs(const VectorXd& x, int begin, int count) {
  double s = 0.0;
  for (int i = 0; i < count; ++i) s += ((begin + i) % 2 == 0 ? 1.0 : -1.0) * x(begin + i);
  return std::abs(s / count);
}

}  // namespace

double expectation(const Mps& psi_in,
                   const std::vector<std::pair<int, Eigen::MatrixXd>>& site_ops) {
  if (site_ops.empty()) return psi_in.norm2();
  int lo = psi_in.n, hi = -1;
  for (const auto& [s, op] : site_ops) {
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    if (s < 0 || s >= psi_in.n) throw std::out_of_range("site out of range");
  }
  std::vector<MatrixXd> local(hi - lo + 1);
  std::vector<bool> has(hi - lo + 1, false);
  for (const auto& [s, op] : site_ops) {
    if (has[s - lo])
      local[s - lo] = local[s - lo] * op;
    else {
      local[s - lo] = op;
      has[s - lo] = true;
    }
  }

  Mps psi = psi_in;
  move_center_to(psi, lo);
  MatrixXd e = MatrixXd::Identity(psi.site[lo].dl, psi.site[lo].dl);
  for (int i = lo; i <= hi; ++i)
    e = has[i - lo] ? fold_operator(e, psi.site[i], local[i - lo])
                    : fold_identity(e, psi.site[i]);
  return e.trace();
}

Eigen::MatrixXd two_site_rdm(const Mps& psi_in, int i, int j) {
  if (i >= j) throw std::invalid_argument("two_site_rdm: need i < j");
  Mps psi = psi_in;
  move_center_to(psi, i);
  const int d = psi.d;

  if (j == i + 1) {
    MatrixXd q = bond_gram_matrix(psi, i);
    return q * q.transpose();
  }

  // M_{s s'}(bk, bb) = sum_a C(a,s,bk) C(a,s',bb), folded up to site j.
  const auto& c = psi.site[i];
  std::vector<MatrixXd> m(static_cast<std::size_t>(d) * d);
  for (int s = 0; s < d; ++s)
    for (int sp = 0; sp < d; ++sp) {
      Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> ket(
          c.v.data() + static_cast<long>(s) * c.dl, c.dl, c.dr,
          Eigen::OuterStride<>(static_cast<long>(c.dl) * c.d));
      Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> bra(
          c.v.data() + static_cast<long>(sp) * c.dl, c.dl, c.dr,
          Eigen::OuterStride<>(static_cast<long>(c.dl) * c.d));
      m[s * d + sp] = ket.transpose() * bra;  // (bk, bb)
    }
  for (int mid = i + 1; mid < j; ++mid)
    for (auto& blk : m) blk = fold_identity(blk, psi.site[mid]);

  const auto& aj = psi.site[j];
  MatrixXd rho = MatrixXd::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
  for (int s = 0; s < d; ++s)
    for (int sp = 0; sp < d; ++sp)
      for (int t = 0; t < d; ++t)
        for (int tp = 0; tp < d; ++tp) {
          Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> ket(
              aj.v.data() + static_cast<long>(t) * aj.dl, aj.dl, aj.dr,
              Eigen::OuterStride<>(static_cast<long>(aj.dl) * aj.d));
          Eigen::Map<const MatrixXd, 0, Eigen::OuterStride<>> bra(
              aj.v.data() + static_cast<long>(tp) * aj.dl, aj.dl, aj.dr,
              Eigen::OuterStride<>(static_cast<long>(aj.dl) * aj.d));
          rho(s * d + t, sp * d + tp) =
              (ket.transpose() * m[s * d + sp] * bra).trace();
        }
  return rho;
}

Eigen::MatrixXd spin_marginal(const Eigen::MatrixXd& rho4) {
  if (rho4.rows() != 16) throw std::invalid_argument("expected a 16x16 matrix");
  MatrixXd rho = MatrixXd::Zero(4, 4);
  // local index = 2*band + spin; trace the band of each factor
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2)
      for (int t1 = 0; t1 < 2; ++t1)
        for (int t2 = 0; t2 < 2; ++t2)
          for (int b1 = 0; b1 < 2; ++b1)
            for (int b2 = 0; b2 < 2; ++b2)
              rho(s1 * 2 + s2, t1 * 2 + t2) +=
                  rho4((2 * b1 + s1) * 4 + (2 * b2 + s2),
                       (2 * b1 + t1) * 4 + (2 * b2 + t2));
  return rho;
}

double triplet_overlap(const Eigen::MatrixXd& rho_spin) {
  Eigen::Vector4d t;
  t << 0.0, 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0;  // (|up,dn>+|dn,up>)/sqrt2
  return t.dot(rho_spin * t);
}

Eigen::VectorXd correlation_row(const Mps& psi_in, int i, const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b, int range) {
  if (i < 0 || i + range >= psi_in.n) throw std::out_of_range("correlation range");
  Mps psi = psi_in;
  move_center_to(psi, i);

  const double a_mean = center_expectation(psi.site[i], a);
  MatrixXd e = fold_operator(MatrixXd::Identity(psi.site[i].dl, psi.site[i].dl),
                             psi.site[i], a);
  VectorXd out(range);
  Mps walker = psi;  // for <B_j> means
  for (int r = 1; r <= range; ++r) {
    const int j = i + r;
    move_center_to(walker, j);
    const double b_mean = center_expectation(walker.site[j], b);
    const double ab = fold_operator(e, psi.site[j], b).trace();
    out(r - 1) = ab - a_mean * b_mean;
    if (r < range) e = fold_identity(e, psi.site[j]);
  }
  return out;
}

LuttingerFit fit_luttinger_k(const Eigen::VectorXd& c) {
  LuttingerFit fit;
  // usable prefix: nonzero values
  int len = 0;
  while (len < c.size() && std::abs(c(len)) > 1e-12) ++len;
  if (len < 8) {
    fit.error = "fewer than 8 usable points";
    return fit;
  }
  for (int r = 0; r + 1 < len; ++r) {
    if (c(r) * c(r + 1) >= 0.0) {
      fit.error = "sign pattern not alternating";
      return fit;
    }
    if (std::abs(c(r + 1)) > 1.15 * std::abs(c(r))) {
      fit.error = "magnitude not monotone";
      return fit;
    }
  }

  VectorXd x(len), y(len);
  for (int r = 0; r < len; ++r) {
    x(r) = std::log(static_cast<double>(r + 1));
    y(r) = std::log(std::abs(c(r)));
  }
  const double xm = x.mean(), ym = y.mean();
  double sxx = 0.0, sxy = 0.0;
  for (int r = 0; r < len; ++r) {
    sxx += (x(r) - xm) * (x(r) - xm);
    sxy += (x(r) - xm) * (y(r) - ym);
  }
  const double slope = sxy / sxx;
  if (slope >= 0.0) {
    fit.error = "non-decaying correlations";
    return fit;
  }
  double ss = 0.0;
  for (int r = 0; r < len; ++r) {
    const double resid = y(r) - ym - slope * (x(r) - xm);
    ss += resid * resid;
  }
  const double slope_err = std::sqrt(ss / std::max(1, len - 2) / sxx);
  fit.k = -1.0 / (2.0 * slope);
  fit.k_err = slope_err / (2.0 * slope * slope);
  fit.residual = std::sqrt(ss / len);
  fit.valid = true;
  return fit;
}

ObservableSet compute_observables(const Mps& psi_in, const QuantumParams& p) {
  if (psi_in.d != 4)
    throw std::invalid_argument("compute_observables expects the d = 4 models");
  if (psi_in.n < 24)
    throw std::invalid_argument("central 20-site window needs n >= 24");

  const auto& alg = SiteAlgebra::instance();
  const int n = psi_in.n;

  ObservableSet obs;
  obs.n = n;
  obs.sz.resize(n);
  obs.mz.resize(n);
  obs.mx.resize(n);
  obs.bond_triplet.resize(n - 1);

  Mps psi = psi_in;
  move_center_to(psi, 0);
  for (int i = 0; i < n; ++i) {
    move_center_to(psi, i);
    obs.sz(i) = center_expectation(psi.site[i], alg.sz);
    obs.mz(i) = center_expectation(psi.site[i], alg.mz);
    obs.mx(i) = center_expectation(psi.site[i], alg.mx);
    if (i < n - 1) {
      MatrixXd q = bond_gram_matrix(psi, i);
      MatrixXd rho = q * q.transpose();
      obs.bond_triplet(i) = triplet_overlap(spin_marginal(rho));
    }
  }

  const double total_sz = obs.sz.sum();
  obs.m_z = total_sz / (2.0 * n);
  obs.sector = static_cast<int>(std::lround(total_sz));
  obs.sector_residual = std::abs(total_sz - obs.sector);
  obs.flipped_count = (obs.sector + n) / 2;

  const double sz2 = mpo_expectation(psi, total_sz_squared_mpo(n, 4, alg.sz));
  obs.mag_variance = std::max(0.0, sz2 - total_sz * total_sz);

  const int w0 = (n - 20) / 2;
  obs.phi = staggered_abs(obs.sz, w0, 20);
  obs.d_x = staggered_abs(obs.mx, w0, 20);
  obs.d_t = staggered_abs(obs.bond_triplet, w0, 20);

  // Correlators from a fixed bulk site.
  obs.corr_i0 = n / 2 - 3;
  const int range = std::min(15, n - obs.corr_i0 - 2);
  obs.c_tau = correlation_row(psi, obs.corr_i0, alg.tau_p, alg.tau_m, range);
  obs.c_sigma = correlation_row(psi, obs.corr_i0, alg.sp, alg.sm, range);
  obs.c_msigma = correlation_row(psi, obs.corr_i0, alg.mp, alg.mm, range);
  obs.cz_tau = correlation_row(psi, obs.corr_i0, alg.tau_z, alg.tau_z, range);
  obs.cz_sigma = correlation_row(psi, obs.corr_i0, alg.sz, alg.sz, range);
  obs.cz_msigma = correlation_row(psi, obs.corr_i0, alg.mz, alg.mz, range);
  obs.k = fit_luttinger_k(obs.c_tau);

  // Composite-flip fluid prediction at the observed filling.
  double dev = 0.0, lock = 0.0, p2 = 0.0, p3 = 0.0;
  if (obs.flipped_count >= 0 && obs.flipped_count <= n) {
    const XxChain xx(n, p.g, p.h, p.delta);
    const VectorXd pred = xx.tau_z_profile(obs.flipped_count);
    for (int i = w0; i < w0 + 20; ++i)
      dev = std::max(dev, std::abs(obs.sz(i) - pred(i)));
  }
  for (int i = w0; i < w0 + 20; ++i)
    lock = std::max(lock, std::abs(obs.sz(i) - obs.mz(i)));
  auto period_err = [&](const VectorXd& x, int per) {
    double e = 0.0;
    for (int i = w0; i + per < w0 + 20; ++i)
      e = std::max(e, std::abs(x(i) - x(i + per)));
    return e;
  };
  for (const auto* v : {&obs.sz, &obs.mz, &obs.mx}) {
    p2 = std::max(p2, period_err(*v, 2));
    p3 = std::max(p3, period_err(*v, 3));
  }
  obs.hplus_profile_dev = dev;
  obs.locking_dev = lock;
  obs.period2_err = p2;
  obs.period3_err = p3;
  obs.structure_range =
      std::max(obs.sz.segment(w0, 20).maxCoeff() - obs.sz.segment(w0, 20).minCoeff(),
               obs.mx.segment(w0, 20).maxCoeff() - obs.mx.segment(w0, 20).minCoeff());
  return obs;
}

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::P: return "P";
    case Phase::N: return "N";
    case Phase::D: return "D";
    case Phase::SMF: return "SMF";
    case Phase::SMF_CDW: return "SMF_CDW";
    case Phase::T: return "T";
    case Phase::U: return "U";
  }
  return "?";
}

PhaseLabel classify_phase(const ObservableSet& obs, bool converged,
                          const ClassifyContext& ctx) {
  if (!converged)
    throw std::invalid_argument("classification refused: unconverged input");

  if (obs.sector == -obs.n)
    return {Phase::P, "integer sector M_z = -1/2"};
  if (obs.phi > kNeelThreshold)
    return {Phase::N, "|Phi| > 0.025"};
  if (obs.sector == 0 && obs.d_t > kDimerThreshold)
    return {Phase::D, "M_z = 0 and D_T > 0.01"};

  const bool period3 =
      obs.period3_err <= kPeriodTolerance && obs.structure_range > 0.05;
  if (period3) {
    if (!ctx.has_scan)
      return {Phase::T, "period-3 uniform central window"};
    if (ctx.plateau_sector && *ctx.plateau_sector == obs.sector)
      return {Phase::T, "plateau sector with period-3 order"};
  }

  if (obs.flipped_count > 0 && obs.hplus_profile_dev <= kHplusTrackTol &&
      !ctx.kink_flagged)
    return {Phase::SMF, "profile tracks the composite-flip fluid"};

  if (obs.k.valid && obs.k.k + obs.k.k_err < 1.0 && obs.sector > -obs.n &&
      obs.sector < 0)
    return {Phase::SMF_CDW, "fitted K below 1"};

  return {Phase::U, "no criterion fired"};
}

}  // namespace spinphonon
