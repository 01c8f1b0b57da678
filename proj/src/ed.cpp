#include "spinphonon/ed.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "spinphonon/lanczos.hpp"
#include "spinphonon/model_builders.hpp"
#include "spinphonon/site_algebra.hpp"

namespace spinphonon {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

SpMat kron_sparse(const SpMat& a, const SpMat& b) {
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) * b.nonZeros());
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
          trip.emplace_back(ia.row() * b.rows() + ib.row(),
                            ia.col() * b.cols() + ib.col(),
                            ia.value() * ib.value());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat block_of(const MpoSite& ws, int wl, int wr, int d) {
  SpMat m(d, d);
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& e : ws.ent)
    if (e.wl == wl && e.wr == wr) trip.emplace_back(e.so, e.si, e.v);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

DenseModel dense_from_mpo(const Mpo& mpo) {
  double dim_d = std::pow(static_cast<double>(mpo.d), mpo.n);
  if (dim_d > static_cast<double>(kEdDimCap))
    throw std::length_error("dense_from_mpo: dimension exceeds 4^10 cap");
  const long dim = static_cast<long>(dim_d);

  // Fold the FSM: acc[w] = operator on the sites seen so far that sits in
  // MPO state w. The final state of the last site carries H.
  std::vector<SpMat> acc;
  {
    SpMat one(1, 1);
    one.insert(0, 0) = 1.0;
    acc.assign(mpo.site[0].wl, SpMat(1, 1));
    acc[0] = one;
  }
  long cur = 1;
  for (int i = 0; i < mpo.n; ++i) {
    const auto& ws = mpo.site[i];
    std::vector<SpMat> next(ws.wr, SpMat(cur * mpo.d, cur * mpo.d));
    std::vector<bool> seen_l(ws.wl, false), seen_r(ws.wr, false);
    for (const auto& e : ws.ent) seen_r[e.wr] = true;
    for (int wl = 0; wl < ws.wl; ++wl) seen_l[wl] = acc[wl].nonZeros() > 0;
    for (int wl = 0; wl < ws.wl; ++wl) {
      if (!seen_l[wl]) continue;
      for (int wr = 0; wr < ws.wr; ++wr) {
        if (!seen_r[wr]) continue;
        SpMat blk = block_of(ws, wl, wr, mpo.d);
        if (blk.nonZeros() == 0) continue;
        next[wr] += kron_sparse(acc[wl], blk);
      }
    }
    acc.swap(next);
    cur *= mpo.d;
  }
  SpMat h = acc.back();
  h.makeCompressed();

  DenseModel m;
  m.n = mpo.n;
  m.d = mpo.d;
  m.dim = dim;
  if (dim <= kEdDenseCap) {
    m.is_dense = true;
    m.h_dense = Eigen::MatrixXd(h);
  } else {
    m.h_sparse = std::move(h);
  }
  return m;
}

std::vector<long> sector_indices(int n, int d, int total_sz,
                                 const std::vector<int>& level_charge) {
  if (static_cast<int>(level_charge.size()) != d)
    throw std::invalid_argument("level_charge must have one entry per level");
  std::vector<long> idx;
  const long dim = static_cast<long>(std::pow(static_cast<double>(d), n));
  for (long s = 0; s < dim; ++s) {
    long rest = s;
    int q = 0;
    for (int i = 0; i < n; ++i) {
      q += level_charge[rest % d];
      rest /= d;
    }
    if (q == total_sz) idx.push_back(s);
  }
  return idx;
}

GroundState ground_state_exact(const DenseModel& m, std::optional<int> sector,
                               const std::vector<int>& level_charge) {
  GroundState out;

  std::vector<long> basis;
  if (sector) {
    basis = sector_indices(m.n, m.d, *sector, level_charge);
    if (basis.empty())
      throw std::invalid_argument("empty magnetization sector");
    out.basis = basis;
  }

  if (m.is_dense) {
    Eigen::MatrixXd h;
    if (sector) {
      const long ns = static_cast<long>(basis.size());
      h.resize(ns, ns);
      for (long i = 0; i < ns; ++i)
        for (long j = 0; j < ns; ++j) h(i, j) = m.h_dense(basis[i], basis[j]);
    } else {
      h = m.h_dense;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    out.energy = es.eigenvalues()(0);
    out.vector = es.eigenvectors().col(0);
    return out;
  }

  SpMat h;
  if (sector) {
    std::vector<long> inv(m.dim, -1);
    for (std::size_t i = 0; i < basis.size(); ++i) inv[basis[i]] = static_cast<long>(i);
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < m.h_sparse.outerSize(); ++k)
      for (SpMat::InnerIterator it(m.h_sparse, k); it; ++it)
        if (inv[it.row()] >= 0 && inv[it.col()] >= 0)
          trip.emplace_back(inv[it.row()], inv[it.col()], it.value());
    h.resize(basis.size(), basis.size());
    h.setFromTriplets(trip.begin(), trip.end());
  } else {
    h = m.h_sparse;
  }

  // deterministic pseudo-random start; a structured start can be orthogonal
  // to the ground space
  Eigen::VectorXd v(h.rows());
  std::mt19937_64 rng(0x5b1ce5u);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (long i = 0; i < v.size(); ++i) v(i) = dist(rng);
  v.normalize();
  auto apply = [&](const auto& x, Eigen::VectorXd& y) { y.noalias() = h * x; };
  auto res = lanczos_lowest(apply, v, 1e-12, 2000, 60);
  if (!res.converged) {
    // retry from a different start before giving up
    for (long i = 0; i < v.size(); ++i) v(i) = dist(rng);
    v.normalize();
    res = lanczos_lowest(apply, v, 1e-12, 4000, 60);
    if (!res.converged)
      throw std::runtime_error("ed: Lanczos failed to converge (residual " +
                               std::to_string(res.residual) + ")");
  }
  out.energy = res.value;
  out.vector = v;
  return out;
}

SwScalingResult sw_scaling_check(const std::vector<double>& g_list, double delta,
                                 double chi, double h, int n) {
  if (g_list.size() < 2)
    throw std::invalid_argument("sw_scaling_check: need at least two couplings");

  const std::vector<int> charge4 = {-1, 1, -1, 1};
  const std::vector<int> charge2 = {-1, 1};

  SwScalingResult out;
  Eigen::MatrixXd pts(g_list.size(), 2);
  for (std::size_t i = 0; i < g_list.size(); ++i) {
    const double g = g_list[i];

    QuantumParams p = make_params(g, h, n);
    // Use the requested chi for both models: scale eta_a accordingly.
    p.eta_a = chi * p.eta0 * p.l_over_a;
    DenseModel full = dense_from_mpo(build_full_mpo(p));
    DenseModel eff =
        dense_from_mpo(build_effective_mpo(effective_params(g, delta, chi), h, n));

    // Compare within the magnetization sector of the effective ground state.
    GroundState ge = ground_state_exact(eff);
    int sector = 0;
    {
      double sz = 0.0;
      Eigen::MatrixXd szop = Eigen::MatrixXd::Zero(eff.dim, eff.dim);
      for (int site = 0; site < n; ++site)
        szop += dense_product_operator(n, 2, {{site, SpinHalfAlgebra::instance().sz}});
      sz = ge.vector.dot(szop * ge.vector);
      sector = static_cast<int>(std::lround(sz));
    }
    GroundState ge_sec = ground_state_exact(eff, sector, charge2);
    GroundState gf_sec = ground_state_exact(full, sector, charge4);

    const double dev = std::abs(gf_sec.energy - ge_sec.energy);
    if (dev < 1e-12)
      throw std::runtime_error(
          "sw_scaling_check: energy difference below the 1e-12 precision floor; "
          "increase the coupling range");
    out.deviations.push_back(dev);
    pts(i, 0) = std::log(g);
    pts(i, 1) = std::log(dev);
  }

  const double xm = pts.col(0).mean(), ym = pts.col(1).mean();
  double num = 0.0, den = 0.0;
  for (long i = 0; i < pts.rows(); ++i) {
    num += (pts(i, 0) - xm) * (pts(i, 1) - ym);
    den += (pts(i, 0) - xm) * (pts(i, 0) - xm);
  }
  out.slope = num / den;
  return out;
}

}  // namespace spinphonon
