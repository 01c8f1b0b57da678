#include "spinphonon/model_builders.hpp"

#include <cmath>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "spinphonon/site_algebra.hpp"

namespace spinphonon {

const EtaSet& working_point_etas() {
  static EtaSet etas = [] {
    LatticeSpec spec;  // V_L = 20 E_R, L = 2a
    return compute_wannier_coefficients(spec).etas;
  }();
  return etas;
}

QuantumParams make_params(double g, double h, int n, const EtaSet& etas,
                          double l_over_a) {
  QuantumParams p;
  p.g = g;
  p.h = h;
  p.n = n;
  p.eta0 = etas.eta0;
  p.eta_a = etas.eta_a;
  p.eta_b = etas.eta_b;
  p.l_over_a = l_over_a;
  return p;
}

QuantumParams make_params(double g, double h, int n) {
  return make_params(g, h, n, working_point_etas(), 2.0);
}

double scaled_coupling_from_j(double j, double l_over_a, double eta0) {
  return 0.5 * j * std::exp(-2.0 / l_over_a) * eta0 * eta0;
}

namespace {

// Two-site pieces of the interaction bracket, as (left, right, coefficient).
struct BondTerm {
  Eigen::MatrixXd a, b;
  double c;
};

std::vector<BondTerm> interaction_terms(const QuantumParams& p,
                                        bool appendix_variant) {
  const auto& s = SiteAlgebra::instance();
  const double cs = 2.0 * p.g * p.bracket_sum();
  const double cd = 2.0 * p.g * p.bracket_diff();

  std::vector<BondTerm> t;
  auto both_hops = [&](const Eigen::MatrixXd& ml, const Eigen::MatrixXd& mr,
                       double c) {
    // m_l m_r (sp_i sm_{i+1} + sm_i sp_{i+1}) with the motional factors given
    t.push_back({ml * s.sp, mr * s.sm, c});
    t.push_back({ml * s.sm, mr * s.sp, c});
  };

  both_hops(s.mx, s.mx, 2.0 * p.g);
  both_hops(s.mx, s.id, -cs);
  both_hops(s.id, s.mx, +cs);
  if (!appendix_variant) {
    both_hops(s.mx, s.mz, -cd);
    both_hops(s.mz, s.mx, +cd);
  } else {
    both_hops(s.mx, s.mz, -cd);
    both_hops(s.id, s.mx * s.mz, +cd);
  }
  return t;
}

}  // namespace

Mpo build_full_mpo(const QuantumParams& p, bool appendix_variant) {
  const auto& s = SiteAlgebra::instance();
  MpoBuilder b(p.n, 4);
  b.add_onsite(p.delta * s.mz + p.h * s.sz);
  for (const auto& term : interaction_terms(p, appendix_variant))
    b.add_bond(term.a, term.b, term.c);
  return b.build();
}

Eigen::MatrixXd build_full_dense(const QuantumParams& p, bool appendix_variant) {
  if (p.n > 8) throw std::length_error("build_full_dense: n > 8");
  const auto& s = SiteAlgebra::instance();
  const long dim = 1L << (2 * p.n);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < p.n; ++i)
    h += dense_product_operator(p.n, 4, {{i, p.delta * s.mz + p.h * s.sz}});
  for (int i = 0; i + 1 < p.n; ++i)
    for (const auto& term : interaction_terms(p, appendix_variant))
      h += term.c *
           dense_product_operator(p.n, 4, {{i, term.a}, {i + 1, term.b}});
  return h;
}

EffectiveParams effective_params(double g, double delta, double chi) {
  EffectiveParams ep;
  ep.chi = chi;
  ep.delta = delta;
  ep.j1 = g * g * (1.0 + 4.0 * chi * chi) / (2.0 * delta);
  ep.j2 = g * g * chi * chi / delta;
  return ep;
}

Mpo build_effective_mpo(const EffectiveParams& ep, double h, int n) {
  const auto& s = SpinHalfAlgebra::instance();
  MpoBuilder b(n, 2);
  b.add_constant(-n * ep.delta - (n - 1) * ep.j1);
  b.add_onsite(h * s.sz);
  b.add_bond(s.sz, s.sz, ep.j1);
  b.add_nnn(s.sp, s.sm, 2.0 * ep.j2);
  b.add_nnn(s.sm, s.sp, 2.0 * ep.j2);
  return b.build();
}

Mpo build_hplus_mpo(double g, double h, double delta, int n) {
  const auto& s = SiteAlgebra::instance();
  MpoBuilder b(n, 4);
  b.add_onsite((delta + h) * s.tau_z);
  b.add_bond(s.tau_p, s.tau_m, 2.0 * g);
  b.add_bond(s.tau_m, s.tau_p, 2.0 * g);
  return b.build();
}

Mpo build_subchain_mpo(const EffectiveParams& ep, double h, int n) {
  const auto& s = SpinHalfAlgebra::instance();
  MpoBuilder b(n, 2);
  b.add_onsite((h - 2.0 * ep.j1) * s.sz);
  b.add_bond(s.sp, s.sm, 2.0 * ep.j2);
  b.add_bond(s.sm, s.sp, 2.0 * ep.j2);
  return b.build();
}

WeakCouplingBoundaries weak_coupling_boundaries(const EffectiveParams& ep,
                                                double g) {
  return {2.0 * (ep.j1 - ep.j2), 2.0 * (ep.j1 + ep.j2), g * g / ep.delta};
}

double magnetization_weak(double h, const EffectiveParams& ep) {
  if (ep.j2 == 0.0) {
    if (h == 2.0 * ep.j1)
      throw std::domain_error("magnetization_weak: degenerate branch at J2 = 0");
    return h > 2.0 * ep.j1 ? -0.5 : 0.0;
  }
  const double arg = (h - 2.0 * ep.j1) / (2.0 * ep.j2);
  if (arg >= 1.0) return -0.5;
  if (arg <= -1.0) return 0.0;
  return -0.5 + std::acos(arg) / (2.0 * M_PI);
}

CommutingDecomposition decompose_commuting_part(const QuantumParams& p) {
  if (p.n > 8) throw std::length_error("decompose_commuting_part: n > 8");
  const auto& s = SiteAlgebra::instance();
  const int n = p.n;
  const long dim = 1L << (2 * n);

  CommutingDecomposition out;
  out.h_full = build_full_dense(p);
  out.h_plus = Eigen::MatrixXd::Zero(dim, dim);
  out.h_minus = Eigen::MatrixXd::Zero(dim, dim);
  out.h_pm = Eigen::MatrixXd::Zero(dim, dim);

  auto prod1 = [&](int i, const Eigen::MatrixXd& m) {
    return dense_product_operator(n, 4, {{i, m}});
  };
  auto prod2 = [&](int i, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return dense_product_operator(n, 4, {{i, a}, {i + 1, b}});
  };

  for (int i = 0; i < n; ++i) {
    out.h_plus += (p.delta + p.h) * prod1(i, s.tau_z);
    out.h_minus += (-p.delta + p.h) * prod1(i, s.gamma_z);
  }
  for (int i = 0; i + 1 < n; ++i) {
    out.h_plus += 2.0 * p.g * (prod2(i, s.tau_p, s.tau_m) + prod2(i, s.tau_m, s.tau_p));
    out.h_minus +=
        2.0 * p.g * (prod2(i, s.gamma_p, s.gamma_m) + prod2(i, s.gamma_m, s.gamma_p));
    out.h_pm += 2.0 * p.g *
                (prod2(i, s.tau_p, s.gamma_m) + prod2(i, s.gamma_m, s.tau_p) +
                 prod2(i, s.gamma_p, s.tau_m) + prod2(i, s.tau_m, s.gamma_p));
  }
  out.h_prime = out.h_plus + out.h_minus + out.h_pm;
  out.h_second = out.h_full - out.h_prime;
  return out;
}

ModelInstance make_model(const std::string& model, double g, double h, int n) {
  ModelInstance mi;
  mi.model = model;
  mi.params = make_params(g, h, n);
  if (model == "full") {
    mi.mpo = build_full_mpo(mi.params);
  } else if (model == "hplus") {
    mi.mpo = build_hplus_mpo(g, h, mi.params.delta, n);
  } else if (model == "effective") {
    mi.mpo = build_effective_mpo(
        effective_params(g, mi.params.delta, mi.params.chi()), h, n);
  } else if (model == "subchain_xx") {
    mi.mpo = build_subchain_mpo(
        effective_params(g, mi.params.delta, mi.params.chi()), h, n);
  } else {
    throw std::invalid_argument("unknown model: " + model);
  }
  return mi;
}

ModelInstance model_from_descriptor(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  const std::string model = j.at("model").get<std::string>();
  const int n = j.at("N").get<int>();
  const double g = j.at("g_over_Delta").get<double>();
  const double h = j.at("h_over_Delta").get<double>();

  EtaSet etas = working_point_etas();
  double l_over_a = 2.0;
  if (j.contains("eta_source")) {
    nlohmann::json src = j["eta_source"];
    if (src.is_string()) {
      std::ifstream f(src.get<std::string>());
      if (!f)
        throw std::runtime_error("eta_source file not found: " +
                                 src.get<std::string>());
      src = nlohmann::json::parse(f);
    }
    etas.eta0 = src.at("eta0").get<double>();
    etas.eta_a = src.at("eta_a_over_a").get<double>();
    etas.eta_b = src.at("eta_b_over_a").get<double>();
    if (src.contains("L_over_a")) l_over_a = src["L_over_a"].get<double>();
    etas.chi = etas.eta_a / (etas.eta0 * l_over_a);
  }

  ModelInstance mi;
  mi.model = model;
  mi.params = make_params(g, h, n, etas, l_over_a);
  if (model == "full") {
    mi.mpo = build_full_mpo(mi.params);
  } else if (model == "hplus") {
    mi.mpo = build_hplus_mpo(g, h, mi.params.delta, n);
  } else if (model == "effective") {
    mi.mpo = build_effective_mpo(
        effective_params(g, mi.params.delta, mi.params.chi()), h, n);
  } else if (model == "subchain_xx") {
    mi.mpo = build_subchain_mpo(
        effective_params(g, mi.params.delta, mi.params.chi()), h, n);
  } else {
    throw std::invalid_argument("unknown model: " + model);
  }
  return mi;
}

}  // namespace spinphonon
