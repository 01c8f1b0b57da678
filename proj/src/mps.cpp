#include "spinphonon/mps.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace spinphonon {

int Mps::bond_dim(int b) const {
  if (b <= 0 || b >= n) return 1;
  return site[b].dl;
}

int Mps::max_bond() const {
  int m = 1;
  for (int b = 1; b < n; ++b) m = std::max(m, bond_dim(b));
  return m;
}

double Mps::norm2() const {
  Eigen::MatrixXd e = Eigen::MatrixXd::Identity(1, 1);
  for (int i = 0; i < n; ++i) {
    const auto& a = site[i];
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(a.dr, a.dr);
    // next(b, b') = sum_{a a' s} e(a, a') A(a, s, b) A(a', s, b)
    for (int s = 0; s < a.d; ++s) {
      // A(:, s, :) as a dl x dr matrix with column stride dl*d
      Eigen::Map<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> ablk(
          a.v.data() + static_cast<long>(s) * a.dl, a.dl, a.dr,
          Eigen::OuterStride<>(static_cast<long>(a.dl) * a.d));
      next.noalias() += ablk.transpose() * e * ablk;
    }
    e = next;
  }
  return e(0, 0);
}

namespace {

// Left-orthogonalize site i, absorbing the remainder into site i+1.
void push_right(Mps& psi, int i) {
  auto& a = psi.site[i];
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.right());
  const int r = std::min<int>(a.dl * a.d, a.dr);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.dl * a.d, r);
  Eigen::MatrixXd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();

  auto& b = psi.site[i + 1];
  SiteTensor nb(r, b.d, b.dr);
  nb.left().noalias() = rr * b.left();
  SiteTensor na(a.dl, a.d, r);
  na.right() = q;
  a = std::move(na);
  psi.site[i + 1] = std::move(nb);
}

// Right-orthogonalize site i, absorbing the remainder into site i-1.
void push_left(Mps& psi, int i) {
  auto& a = psi.site[i];
  Eigen::MatrixXd mt = a.left().transpose();  // (d*dr) x dl
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(mt);
  const int r = std::min<int>(a.d * a.dr, a.dl);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(a.d * a.dr, r);
  Eigen::MatrixXd rr = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();

  auto& b = psi.site[i - 1];
  SiteTensor nb(b.dl, b.d, r);
  nb.right().noalias() = b.right() * rr.transpose();
  SiteTensor na(r, a.d, a.dr);
  na.left() = q.transpose();
  a = std::move(na);
  psi.site[i - 1] = std::move(nb);
}

}  // namespace

void move_center_to(Mps& psi, int target) {
  if (target < 0 || target >= psi.n) throw std::out_of_range("center out of range");
  while (psi.center < target) {
    push_right(psi, psi.center);
    ++psi.center;
  }
  while (psi.center > target) {
    push_left(psi, psi.center);
    --psi.center;
  }
  auto& c = psi.site[psi.center];
  const double nrm = c.v.norm();
  if (nrm > 0.0) c.v /= nrm;
}

double isometry_defect(const Mps& psi, int i) {
  const auto& a = psi.site[i];
  if (i < psi.center) {
    Eigen::MatrixXd g = a.right().transpose() * a.right();
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }
  if (i > psi.center) {
    Eigen::MatrixXd g = a.left() * a.left().transpose();
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }
  return std::abs(a.v.norm() - 1.0);
}

Mps random_mps(int n, int d, int init_bond, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need n >= 2");
  Mps psi;
  psi.n = n;
  psi.d = d;
  psi.seed = seed;
  psi.site.resize(n);

  auto bond_cap = [&](int b) {
    double cap = init_bond;
    cap = std::min(cap, std::pow(static_cast<double>(d), std::min(b, n - b)));
    return static_cast<int>(cap);
  };

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    psi.site[i] = SiteTensor(bond_cap(i), d, bond_cap(i + 1));
    for (long k = 0; k < psi.site[i].v.size(); ++k) psi.site[i].v(k) = dist(rng);
  }
  psi.center = n - 1;
  move_center_to(psi, 0);
  return psi;
}

Mps product_mps(int n, int d, const std::vector<int>& labels) {
  if (static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("product state needs one label per site");
  Mps psi;
  psi.n = n;
  psi.d = d;
  psi.site.resize(n);
  for (int i = 0; i < n; ++i) {
    if (labels[i] < 0 || labels[i] >= d)
      throw std::invalid_argument("product state label out of range");
    psi.site[i] = SiteTensor(1, d, 1);
    psi.site[i].at(0, labels[i], 0) = 1.0;
  }
  psi.center = 0;
  return psi;
}

namespace {

template <class T>
void write_pod(std::ofstream& f, const T& x) {
  f.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& f) {
  T x{};
  f.read(reinterpret_cast<char*>(&x), sizeof(T));
  return x;
}

}  // namespace

void save_mps(const Mps& psi_in, const std::string& path) {
  Mps psi = psi_in;
  move_center_to(psi, 0);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write("MPS1", 4);
  write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(psi.n));
  write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(psi.d));
  write_pod<std::uint64_t>(f, psi.seed);
  for (int b = 0; b <= psi.n; ++b)
    write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(psi.bond_dim(b)));
  for (const auto& a : psi.site) {
    for (int ai = 0; ai < a.dl; ++ai)
      for (int s = 0; s < a.d; ++s)
        for (int bi = 0; bi < a.dr; ++bi) {
          write_pod<double>(f, a.at(ai, s, bi));
          write_pod<double>(f, 0.0);
        }
  }
  if (!f) throw std::runtime_error("short write to " + path);
}

Mps load_mps(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (std::memcmp(magic, "MPS1", 4) != 0)
    throw std::runtime_error(path + ": not an MPS checkpoint");
  Mps psi;
  psi.n = static_cast<int>(read_pod<std::uint32_t>(f));
  psi.d = static_cast<int>(read_pod<std::uint32_t>(f));
  psi.seed = read_pod<std::uint64_t>(f);
  std::vector<int> bonds(psi.n + 1);
  for (int b = 0; b <= psi.n; ++b) bonds[b] = static_cast<int>(read_pod<std::uint32_t>(f));
  psi.site.resize(psi.n);
  for (int i = 0; i < psi.n; ++i) {
    psi.site[i] = SiteTensor(bonds[i], psi.d, bonds[i + 1]);
    auto& a = psi.site[i];
    for (int ai = 0; ai < a.dl; ++ai)
      for (int s = 0; s < a.d; ++s)
        for (int bi = 0; bi < a.dr; ++bi) {
          const double re = read_pod<double>(f);
          const double im = read_pod<double>(f);
          if (std::abs(im) > 1e-12)
            throw std::runtime_error(path + ": complex payload not supported");
          a.at(ai, s, bi) = re;
        }
  }
  if (!f) throw std::runtime_error(path + ": truncated checkpoint");
  psi.center = 0;
  return psi;
}

}  // namespace spinphonon
