#include "spinphonon/mpo.hpp"

#include <stdexcept>

#include "spinphonon/contraction.hpp"
#include "spinphonon/mps.hpp"

namespace spinphonon {

void MpoBuilder::add_onsite(const Eigen::MatrixXd& m) {
  if (onsite_.size() == 0) onsite_ = Eigen::MatrixXd::Zero(d_, d_);
  onsite_ += m;
}

void MpoBuilder::add_bond(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                          double c) {
  for (std::size_t k = 0; k < bond_left_.size(); ++k) {
    if ((bond_left_[k] - a).cwiseAbs().maxCoeff() < 1e-14) {
      bond_right_[k] += c * b;
      return;
    }
  }
  bond_left_.push_back(a);
  bond_right_.push_back(c * b);
}

void MpoBuilder::add_nnn(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                         double c) {
  nnn_.emplace_back(a, c * b);
}

Mpo MpoBuilder::build() const {
  const int n_bond = static_cast<int>(bond_left_.size());
  const int n_nnn = static_cast<int>(nnn_.size());
  const int w = 2 + n_bond + 2 * n_nnn;
  const int fin = w - 1;

  auto put = [&](std::vector<MpoEntry>& ent, int wl, int wr,
                 const Eigen::MatrixXd& m) {
    for (int so = 0; so < d_; ++so)
      for (int si = 0; si < d_; ++si)
        if (m(so, si) != 0.0) ent.push_back({wl, wr, so, si, m(so, si)});
  };

  std::vector<MpoEntry> bulk;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d_, d_);
  put(bulk, 0, 0, id);
  put(bulk, fin, fin, id);
  if (onsite_.size() != 0) put(bulk, 0, fin, onsite_);
  for (int k = 0; k < n_bond; ++k) {
    put(bulk, 0, 1 + k, bond_left_[k]);
    put(bulk, 1 + k, fin, bond_right_[k]);
  }
  for (int k = 0; k < n_nnn; ++k) {
    const int s1 = 1 + n_bond + 2 * k, s2 = s1 + 1;
    put(bulk, 0, s1, nnn_[k].first);
    put(bulk, s1, s2, id);
    put(bulk, s2, fin, nnn_[k].second);
  }

  Mpo mpo;
  mpo.n = n_;
  mpo.d = d_;
  mpo.site.resize(n_);
  for (int i = 0; i < n_; ++i) {
    mpo.site[i].wl = w;
    mpo.site[i].wr = w;
    mpo.site[i].ent = bulk;
  }
  if (constant_ != 0.0) put(mpo.site[0].ent, 0, fin, constant_ * id);
  return mpo;
}

double mpo_expectation(const Mps& psi, const Mpo& op) {
  if (psi.n != op.n || psi.d != op.d)
    throw std::invalid_argument("mpo_expectation: shape mismatch");
  detail::Env env = detail::left_boundary(op.site[0].wl);
  for (int i = 0; i < psi.n; ++i)
    env = detail::update_left(env, psi.site[i], op.site[i]);
  return env.v(env.w - 1);  // both bonds are 1; pick the final state
}

}  // namespace spinphonon
