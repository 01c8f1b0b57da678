#pragma once

#include <Eigen/Dense>

#include "spinphonon/mpo.hpp"
#include "spinphonon/mps.hpp"

// MPS/MPO environment contractions shared by the DMRG sweep and observable
// evaluation. Environment layouts (column-major, first index fastest):
//   left  env: E(a_ket, w, a_bra)
//   right env: E(b_ket, b_bra, w)

namespace spinphonon::detail {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::seqN;

struct Env {
  VectorXd v;
  int d1 = 1, d2 = 1, w = 1;
};

inline Env left_boundary(int w) {
  Env e;
  e.v = VectorXd::Zero(w);
  e.v(0) = 1.0;
  e.w = w;
  return e;
}

inline Env right_boundary(int w) {
  Env e;
  e.v = VectorXd::Zero(w);
  e.v(w - 1) = 1.0;
  e.w = w;
  return e;
}

// L[p+1] from L[p] across site tensor A with MPO site W.
inline Env update_left(const Env& l, const SiteTensor& a, const MpoSite& ws) {
  const int dl = a.dl, dr = a.dr, d = a.d;
  const int w1 = ws.wl, w2 = ws.wr;

  Eigen::Map<const MatrixXd> lm(l.v.data(), dl, static_cast<long>(w1) * dl);
  MatrixXd t1 = lm.transpose() * a.left();  // rows (w1, a_bra), cols (s_in, b_ket)

  MatrixXd t2 = MatrixXd::Zero(static_cast<long>(w2) * dl, static_cast<long>(d) * dr);
  for (const auto& e : ws.ent) {
    t2(seqN(e.wr, dl, w2), seqN(e.so, dr, d)) +=
        e.v * t1(seqN(e.wl, dl, w1), seqN(e.si, dr, d));
  }

  Env out;
  out.d1 = out.d2 = dr;
  out.w = w2;
  out.v.resize(static_cast<long>(dr) * dr * w2);
  MatrixXd k(dr, static_cast<long>(dl) * d);
  for (int w = 0; w < w2; ++w) {
    for (int so = 0; so < d; ++so)
      k.middleCols(static_cast<long>(so) * dl, dl) =
          t2(seqN(w, dl, w2), seqN(so, dr, d)).transpose();
    Eigen::Map<MatrixXd, 0, Eigen::OuterStride<>> dst(
        out.v.data() + static_cast<long>(w) * dr, dr, dr,
        Eigen::OuterStride<>(static_cast<long>(dr) * w2));
    dst.noalias() = k * a.right();
  }
  return out;
}

// R[p] from R[p+1] across site tensor A with MPO site W.
inline Env update_right(const Env& r, const SiteTensor& a, const MpoSite& ws) {
  const int dl = a.dl, dr = a.dr, d = a.d;
  const int w1 = ws.wl, w2 = ws.wr;

  Eigen::Map<const MatrixXd> rm(r.v.data(), dr, static_cast<long>(dr) * w2);
  MatrixXd t1 = a.right() * rm;  // rows (a_ket, s_in), cols (b_bra, w2)

  MatrixXd t2 = MatrixXd::Zero(static_cast<long>(dl) * d, static_cast<long>(dr) * w1);
  for (const auto& e : ws.ent) {
    t2.block(static_cast<long>(e.so) * dl, static_cast<long>(e.wl) * dr, dl, dr) +=
        e.v * t1.block(static_cast<long>(e.si) * dl, static_cast<long>(e.wr) * dr,
                       dl, dr);
  }

  Env out;
  out.d1 = out.d2 = dl;
  out.w = w1;
  out.v.resize(static_cast<long>(dl) * dl * w1);
  MatrixXd g(dl, static_cast<long>(d) * dr);
  for (int w = 0; w < w1; ++w) {
    for (int so = 0; so < d; ++so) {
      g(Eigen::all, seqN(so, dr, d)) =
          t2.block(static_cast<long>(so) * dl, static_cast<long>(w) * dr, dl, dr);
    }
    Eigen::Map<MatrixXd> dst(out.v.data() + static_cast<long>(w) * dl * dl, dl, dl);
    dst.noalias() = g * a.left().transpose();
  }
  return out;
}

// Effective two-site Hamiltonian y = H x, x(a, s1, s2, b) column-major.
struct TwoSiteOp {
  const Env* l;
  const Env* r;
  const MpoSite* wa;
  const MpoSite* wb;
  int dl, dr, d;

  mutable MatrixXd t1, t2, t3, tmp, blk;

  long dim() const { return static_cast<long>(dl) * d * d * dr; }

  void alloc() const {
    const int w1 = wa->wl, w2 = wa->wr, w3 = wb->wr;
    t1.resize(static_cast<long>(w1) * dl, static_cast<long>(d) * d * dr);
    t2.resize(static_cast<long>(w2) * dl, static_cast<long>(d) * d * dr);
    t3.resize(static_cast<long>(w3) * dl, static_cast<long>(d) * d * dr);
    tmp.resize(dl, dr);
    blk.resize(dl, dr);
  }

  void apply(Eigen::Ref<const VectorXd> x, VectorXd& y) const {
    const int w1 = wa->wl, w2 = wa->wr, w3 = wb->wr;
    const long dd = static_cast<long>(d) * d;

    Eigen::Map<const MatrixXd> lm(l->v.data(), dl, static_cast<long>(w1) * dl);
    Eigen::Map<const MatrixXd> xm(x.data(), dl, dd * dr);
    t1.noalias() = lm.transpose() * xm;

    t2.setZero();
    for (const auto& e : wa->ent) {
      t2(seqN(e.wr, dl, w2), seqN(e.so, static_cast<long>(d) * dr, d)) +=
          e.v * t1(seqN(e.wl, dl, w1), seqN(e.si, static_cast<long>(d) * dr, d));
    }

    t3.setZero();
    for (const auto& e : wb->ent) {
      for (int s1 = 0; s1 < d; ++s1) {
        t3(seqN(e.wr, dl, w3), seqN(s1 + e.so * d, dr, dd)) +=
            e.v * t2(seqN(e.wl, dl, w2), seqN(s1 + e.si * d, dr, dd));
      }
    }

    y.setZero();
    Eigen::Map<MatrixXd> ym(y.data(), dl * dd, dr);
    for (int w = 0; w < w3; ++w) {
      Eigen::Map<const MatrixXd> rw(r->v.data() + static_cast<long>(w) * dr * dr,
                                    dr, dr);
      for (long s = 0; s < dd; ++s) {
        blk = t3(seqN(w, dl, w3), seqN(s, dr, dd));
        tmp.noalias() = blk * rw;
        ym.middleRows(s * dl, dl) += tmp;
      }
    }
  }
};

}  // namespace spinphonon::detail
