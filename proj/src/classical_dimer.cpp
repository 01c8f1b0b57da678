#include "spinphonon/classical_dimer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "spinphonon/quadrature.hpp"

namespace spinphonon {

namespace {

double wavenumber(const ClassicalParams& p) { return M_PI / p.a; }

// a_q/eps_q and (a_q cos q + b_q cos... expressed through r = J_S/J_W only:
//   a_q/eps_q            = (r + cos q) / sqrt((r + cos q)^2 + sin^2 q)
//   (J_S cos q + J_W)/eps = (r cos q + 1) / sqrt((r + cos q)^2 + sin^2 q)
double ratio_strong(double r, double q) {
  const double amp = r + std::cos(q);
  const double s = std::sin(q);
  return amp / std::sqrt(amp * amp + s * s);
}

double ratio_weak(double r, double q) {
  const double amp = r + std::cos(q);
  const double s = std::sin(q);
  return (r * std::cos(q) + 1.0) / std::sqrt(amp * amp + s * s);
}

// eps_q is even in q and monotonically decreasing on [0, pi]; the Fermi
// condition eps_q > 2h therefore fills |q| < q_star.
double fermi_boundary(double delta, const ClassicalParams& p, double h2) {
  const double e0 = dispersion(delta, p, 0.0);
  if (e0 <= h2) return 0.0;
  if (dispersion(delta, p, M_PI) > h2) return M_PI;
  double lo = 0.0, hi = M_PI;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dispersion(delta, p, mid) > h2 ? lo : hi) = mid;
    if (hi - lo < 1e-14) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Couplings couplings(double delta, const ClassicalParams& p) {
  const double s2 = std::pow(std::sin(wavenumber(p) * delta), 2);
  return {p.j * s2 * std::exp(-2.0 * (p.a - delta) / p.l),
          p.j * s2 * std::exp(-2.0 * (p.a + delta) / p.l)};
}

double dispersion(double delta, const ClassicalParams& p, double q) {
  const auto [js, jw] = couplings(delta, p);
  const double e2 = js * js + jw * jw + 2.0 * js * jw * std::cos(q);
  return std::sqrt(std::max(0.0, e2));
}

double dispersion_closed_form(double delta, const ClassicalParams& p, double q) {
  const double s2 = std::pow(std::sin(wavenumber(p) * delta), 2);
  const double ch = std::cosh(2.0 * delta / p.l);
  const double arg = 4.0 * ch * ch + 2.0 * (std::cos(q) - 1.0);
  return p.j * std::exp(-2.0 * p.a / p.l) * s2 * std::sqrt(std::max(0.0, arg));
}

double energy_per_atom(double delta, const ClassicalParams& p) {
  const double k = wavenumber(p);
  const double trap = 0.5 * p.v_l * std::pow(std::sin(0.5 * k * delta), 2);
  const double h2 = 2.0 * p.h;

  double interaction = 0.0;
  if (p.n_atoms > 0) {
    const int m = p.n_atoms / 2;  // one momentum per dimer
    for (int i = 0; i < m; ++i) {
      const double q = -M_PI + 2.0 * M_PI * i / m;
      const double eps = dispersion(delta, p, q);
      if (eps > h2) interaction += (h2 - eps) / p.n_atoms;
    }
  } else {
    const double qs = fermi_boundary(delta, p, h2);
    if (qs > 0.0) {
      interaction = gl128().integrate(0.0, qs, [&](double q) {
                      return h2 - dispersion(delta, p, q);
                    }) /
                    (2.0 * M_PI);
    }
  }
  return trap - p.h + interaction;
}

double interaction_energy_h0(double delta, const ClassicalParams& p) {
  const double s2 = std::pow(std::sin(wavenumber(p) * delta), 2);
  const double ch = std::cosh(2.0 * delta / p.l);
  const double modulus = 1.0 / ch;
  if (modulus < 0.0 || modulus > 1.0)
    throw std::domain_error("elliptic modulus outside [0,1]");
  return -(2.0 * p.j * std::exp(-2.0 * p.a / p.l) / M_PI) * s2 * ch *
         std::comp_ellint_2(modulus);
}

double interaction_energy_h0_quadrature(double delta, const ClassicalParams& p) {
  return -gl256().integrate(0.0, M_PI, [&](double q) {
           return dispersion(delta, p, q);
         }) /
         (2.0 * M_PI);
}

TripletFractions triplet_fractions(double delta, const ClassicalParams& p) {
  const double h2 = 2.0 * p.h;
  double qs;
  double r;
  if (std::abs(delta) < 1e-12) {
    // eps_q -> 0 uniformly; the ratios keep a finite limit at r = 1.
    if (p.h > 0.0) return {0.0, 0.0};
    qs = M_PI;
    r = 1.0;
  } else {
    qs = fermi_boundary(delta, p, h2);
    r = std::exp(4.0 * delta / p.l);  // J_S/J_W
  }
  if (qs <= 0.0) return {0.0, 0.0};

  const auto& gl = gl256();
  const double occ = qs / (2.0 * M_PI);  // (1/2pi) int_{filled} (1/2) dq, both halves
  const double is =
      gl.integrate(0.0, qs, [&](double q) { return ratio_strong(r, q); }) /
      (2.0 * M_PI);
  const double iw =
      gl.integrate(0.0, qs, [&](double q) { return ratio_weak(r, q); }) /
      (2.0 * M_PI);

  // Wick contractions of <t^dag t (1 - s^dag s)>; the cross term <t^dag s>
  // vanishes by parity for any filling.
  const double nt_s = occ + is, ns_s = occ - is;
  const double nt_w = occ + iw, ns_w = occ - iw;
  return {nt_s * (1.0 - ns_s), nt_w * (1.0 - ns_w)};
}

ClassicalSolution minimize_dimerization(const ClassicalParams& p) {
  const double hi = 0.5 * p.a * (1.0 - 1e-12);
  const int n_scan = 256;

  double best_d = 0.0, best_e = energy_per_atom(0.0, p);
  for (int i = 1; i <= n_scan; ++i) {
    const double d = hi * i / n_scan;
    const double e = energy_per_atom(d, p);
    if (e < best_e) {
      best_e = e;
      best_d = d;
    }
  }

  if (best_d > 0.0) {
    // Golden-section refinement around the best scan point.
    const double step = hi / n_scan;
    double a = std::max(0.0, best_d - step), b = std::min(hi, best_d + step);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = energy_per_atom(c, p), fd = energy_per_atom(d, p);
    while (b - a > kDeltaTolerance * p.a) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = energy_per_atom(c, p);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = energy_per_atom(d, p);
      }
    }
    best_d = 0.5 * (a + b);
    best_e = energy_per_atom(best_d, p);
  }

  // delta = 0 is always stationary; resolve by direct comparison.
  const double e0 = energy_per_atom(0.0, p);
  if (e0 <= best_e) {
    best_d = 0.0;
    best_e = e0;
  }

  const bool dimerized = best_d > kDimerizationThreshold * p.a;
  const auto tf = triplet_fractions(best_d, p);
  return {best_d, best_e, dimerized, tf.t_strong, tf.t_weak};
}

double critical_coupling(double h, ClassicalParams p, double j_max) {
  p.h = h;
  auto dimerizes = [&](double j) {
    p.j = j;
    return minimize_dimerization(p).dimerized;
  };

  double lo = 0.0, hi = 0.5 * p.v_l;
  while (!dimerizes(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > j_max)
      throw std::runtime_error("critical_coupling: no dimerization in J in [" +
                               std::to_string(lo) + ", " + std::to_string(j_max) +
                               "] V_L at h = " + std::to_string(h));
  }
  while (hi - lo > 1e-4 * p.v_l) {
    const double mid = 0.5 * (lo + hi);
    (dimerizes(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace spinphonon
