#include "spinphonon/lattice_wannier.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace spinphonon {

namespace {

using Cplx = std::complex<double>;

// One plane-wave Hamiltonian block at crystal momentum q (raw units,
// hbar^2/2m = 1). V = V_L sin^2(k_tr x) = V_L/2 - (V_L/4)(e^{ikx} + e^{-ikx}),
// so the matrix is real symmetric tridiagonal in the plane-wave basis.
Eigen::MatrixXd pw_hamiltonian(double q, double v_l_raw, int cutoff, double g) {
  const int m = 2 * cutoff + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m, m);
  for (int n = -cutoff; n <= cutoff; ++n) {
    const int i = n + cutoff;
    h(i, i) = (q + n * g) * (q + n * g) + 0.5 * v_l_raw;
    if (n < cutoff) {
      h(i, i + 1) = -0.25 * v_l_raw;
      h(i + 1, i) = -0.25 * v_l_raw;
    }
  }
  return h;
}

void solve_point(double q, double v_l_raw, int cutoff, double g, int n_bands,
                 Eigen::VectorXd& evals, Eigen::MatrixXd& evecs) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
      pw_hamiltonian(q, v_l_raw, cutoff, g));
  evals = es.eigenvalues().head(n_bands);
  evecs = es.eigenvectors().leftCols(n_bands);
}

// Gauge-fixed plane-wave coefficients of one band at every q. Band 0 is made
// even (Bloch function real positive at the site center), band 1 odd (slope
// real positive after an extra factor -i that the caller applies by taking
// the imaginary part of the Bloch sum).
std::vector<Eigen::VectorXd> gauge_fixed_coeffs(const BandStructure& b, int band) {
  const int n_q = static_cast<int>(b.q.size());
  const int m = static_cast<int>(b.coeff[0].rows());
  const int cutoff = (m - 1) / 2;
  const double g = b.spec.k();

  std::vector<Eigen::VectorXd> out(n_q);
  for (int iq = 0; iq < n_q; ++iq) {
    Eigen::VectorXd c = b.coeff[iq].col(band);
    double anchor = 0.0;
    if (band == 0) {
      anchor = c.sum();  // phi_q(0)
    } else {
      for (int n = -cutoff; n <= cutoff; ++n)
        anchor += c(n + cutoff) * (b.q(iq) + n * g);  // -i phi_q'(0)
    }
    if (std::abs(anchor) < 1e-10)
      throw std::runtime_error(
          "wannier phase convention: parity anchor vanished at q index " +
          std::to_string(iq));
    if (anchor < 0.0) c = -c;
    out[iq] = c;
  }
  return out;
}

Eigen::VectorXd bloch_sum(const BandStructure& b, int band, int site,
                          Eigen::VectorXd* x_out) {
  const auto& gs = b.spec.grid;
  const double period = 2.0;           // trap period, units of a
  const double g = b.spec.k();         // reciprocal vector of the trap lattice
  const int n_q = static_cast<int>(b.q.size());
  const int n = gs.periods * gs.points_per_period;
  const double dx = period / gs.points_per_period;
  const double x0 = -0.5 * gs.periods * period;

  const auto coeffs = gauge_fixed_coeffs(b, band);
  const int m = static_cast<int>(coeffs[0].size());
  const int cutoff = (m - 1) / 2;

  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n_q) * period);
  for (int iq = 0; iq < n_q; ++iq) {
    const double q = b.q(iq);
    const Cplx site_phase = std::exp(Cplx(0.0, -q * period * site));
    for (int nn = -cutoff; nn <= cutoff; ++nn) {
      const double kx = q + nn * g;
      const Cplx amp = norm * coeffs[iq](nn + cutoff) * site_phase;
      for (int j = 0; j < n; ++j) {
        const double x = x0 + j * dx;
        w(j) += amp * std::exp(Cplx(0.0, kx * x));
      }
    }
  }

  // Band 0 comes out real, band 1 purely imaginary (the -i gauge).
  const Eigen::VectorXd re = w.real(), im = w.imag();
  const double scale = std::max(re.cwiseAbs().maxCoeff(), im.cwiseAbs().maxCoeff());
  Eigen::VectorXd result;
  if (band == 0) {
    if (im.cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw std::runtime_error("wannier phase convention: band a not real");
    result = re;
  } else {
    if (re.cwiseAbs().maxCoeff() > 1e-8 * scale)
      throw std::runtime_error("wannier phase convention: band b not i*real");
    result = im;
  }

  if (x_out) {
    x_out->resize(n);
    for (int j = 0; j < n; ++j) (*x_out)(j) = x0 + j * dx;
  }
  return result;
}

}  // namespace

BandStructure solve_band_structure(const LatticeSpec& spec, int n_bands, int n_q) {
  if (n_bands < 1) throw std::invalid_argument("n_bands must be >= 1");
  if (n_q < 2 || n_q % 2 != 0)
    throw std::invalid_argument("n_q must be even and >= 2");

  const double er = spec.recoil();
  const double v_raw = spec.v_l_over_er * er;
  const double g = spec.k();
  const int cutoff = spec.grid.cutoff;

  BandStructure b;
  b.spec = spec;
  b.q.resize(n_q);
  b.energy.resize(n_q, n_bands);
  b.coeff.resize(n_q);

  double worst_shift = 0.0;
  for (int iq = 0; iq < n_q; ++iq) {
    const double q = -0.5 * g + g * iq / n_q;
    b.q(iq) = q;
    Eigen::VectorXd evals;
    Eigen::MatrixXd evecs;
    solve_point(q, v_raw, cutoff, g, n_bands, evals, evecs);

    Eigen::VectorXd evals2;
    Eigen::MatrixXd evecs2;
    solve_point(q, v_raw, 2 * cutoff, g, std::min(n_bands, 2), evals2, evecs2);
    for (int k = 0; k < std::min(n_bands, 2); ++k)
      worst_shift = std::max(worst_shift, std::abs(evals(k) - evals2(k)) / er);

    b.energy.row(iq) = evals.transpose() / er;
    b.coeff[iq] = evecs;
  }
  if (worst_shift > 1e-8)
    throw std::runtime_error(
        "plane-wave basis not converged: cutoff doubling moved the lowest "
        "bands by " +
        std::to_string(worst_shift) + " E_R");
  return b;
}

Eigen::VectorXd build_wannier_band(const BandStructure& bands, int band_index,
                                   Eigen::VectorXd* x_out) {
  return bloch_sum(bands, band_index, 0, x_out);
}

Eigen::VectorXd wannier_at_site(const BandStructure& bands, int band_index,
                                int site) {
  return bloch_sum(bands, band_index, site, nullptr);
}

std::pair<double, double> compute_tunneling(const BandStructure& bands) {
  const int n_q = static_cast<int>(bands.q.size());
  const double period = 2.0;
  double ta = 0.0, tb = 0.0;
  for (int iq = 0; iq < n_q; ++iq) {
    const double c = std::cos(bands.q(iq) * period);
    ta -= bands.energy(iq, 0) * c;
    tb -= bands.energy(iq, 1) * c;
  }
  return {ta / n_q, tb / n_q};
}

WannierPair build_wannier(const BandStructure& bands) {
  if (bands.energy.cols() < 2)
    throw std::invalid_argument("need at least two bands");

  WannierPair wp;
  wp.w_a = bloch_sum(bands, 0, 0, &wp.x);
  wp.w_b = bloch_sum(bands, 1, 0, nullptr);
  wp.dx = wp.x(1) - wp.x(0);

  wp.eps_a = bands.energy.col(0).mean();
  wp.eps_b = bands.energy.col(1).mean();
  wp.delta = wp.eps_b - wp.eps_a;
  wp.delta_min_gap = (bands.energy.col(1) - bands.energy.col(0)).minCoeff();

  std::tie(wp.t_a, wp.t_b) = compute_tunneling(bands);
  return wp;
}

EtaSet compute_etas(WannierPair& wp, double l_over_a) {
  const double k = M_PI;
  const auto& x = wp.x;
  double e0 = 0.0, ea = 0.0, eb = 0.0;
  for (int j = 0; j < x.size(); ++j) {
    const double s = std::sin(k * x(j));
    e0 += s * wp.w_a(j) * wp.w_b(j);
    ea += x(j) * s * wp.w_a(j) * wp.w_a(j);
    eb += x(j) * s * wp.w_b(j) * wp.w_b(j);
  }
  e0 *= wp.dx;
  ea *= wp.dx;
  eb *= wp.dx;

  // The overall sign of w_b is a convention; fix it so eta0 > 0.
  if (e0 < 0.0) {
    wp.w_b = -wp.w_b;
    e0 = -e0;
  }
  return {e0, ea, eb, ea / (e0 * l_over_a)};
}

InteractionCoefficients compute_interaction_coefficients(const WannierPair& wp,
                                                          double l_over_a,
                                                          int separation) {
  const double k = M_PI;
  const double dist = 2.0 * separation;  // site separation, units of a
  const int n = static_cast<int>(wp.x.size());

  Eigen::VectorXd sine(n), wa2(n), wb2(n), wab(n);
  for (int j = 0; j < n; ++j) {
    sine(j) = std::sin(k * wp.x(j));
    wa2(j) = wp.w_a(j) * wp.w_a(j);
    wb2(j) = wp.w_b(j) * wp.w_b(j);
    wab(j) = wp.w_a(j) * wp.w_b(j);
  }

  InteractionCoefficients out{0, 0, 0, 0, 0, 0};
  const double w2 = wp.dx * wp.dx;
  for (int i = 0; i < n; ++i) {
    const double si = sine(i);
    if (std::abs(wa2(i)) + std::abs(wb2(i)) + std::abs(wab(i)) < 1e-30) continue;
    for (int j = 0; j < n; ++j) {
      const double kernel =
          std::exp(-std::abs(dist - wp.x(i) + wp.x(j)) / l_over_a);
      const double f = si * sine(j) * kernel;
      out.v_a += f * wa2(i) * wa2(j);
      out.v_b += f * wb2(i) * wb2(j);
      out.v_ab += f * wa2(i) * wb2(j);
      out.vp_ab += f * wab(i) * wab(j);
      out.v_3ab += f * wa2(i) * wab(j);
      out.v_3ba += f * wb2(i) * wab(j);
    }
  }
  out.v_a *= w2;
  out.v_b *= w2;
  out.v_ab *= w2;
  out.vp_ab *= w2;
  out.v_3ab *= w2;
  out.v_3ba *= w2;
  return out;
}

Eigen::VectorXd band_energies_fd(const LatticeSpec& spec, double q, int n_bands,
                                 int n_points) {
  const double period = 2.0;
  const double h = period / n_points;
  const double er = spec.recoil();
  const double v_raw = spec.v_l_over_er * er;
  const double ktr = spec.k_tr();

  // psi = e^{iqx} u(x) with u periodic: H u = -(u'' + 2iq u' - q^2 u) + V u.
  // 4th-order central stencils keep the matrix Hermitian.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n_points, n_points);
  const double c2 = 1.0 / (12.0 * h * h);
  const double c1 = 1.0 / (12.0 * h);
  for (int j = 0; j < n_points; ++j) {
    const double x = j * h;
    const double v = v_raw * std::pow(std::sin(ktr * x), 2);
    auto wrap = [&](int i) { return (i % n_points + n_points) % n_points; };
    m(j, j) += Cplx(30.0 * c2 + q * q + v, 0.0);
    m(j, wrap(j + 1)) += Cplx(-16.0 * c2, 0.0);
    m(j, wrap(j - 1)) += Cplx(-16.0 * c2, 0.0);
    m(j, wrap(j + 2)) += Cplx(c2, 0.0);
    m(j, wrap(j - 2)) += Cplx(c2, 0.0);
    // -2iq u': antisymmetric stencil
    m(j, wrap(j + 1)) += Cplx(0.0, -2.0 * q * 8.0 * c1);
    m(j, wrap(j - 1)) += Cplx(0.0, 2.0 * q * 8.0 * c1);
    m(j, wrap(j + 2)) += Cplx(0.0, 2.0 * q * c1);
    m(j, wrap(j - 2)) += Cplx(0.0, -2.0 * q * c1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  return es.eigenvalues().head(n_bands) / er;
}

std::string coefficient_record_json(const LatticeSpec& spec, const WannierPair& wp,
                                    const EtaSet& etas) {
  nlohmann::json j;
  j["V_L_over_ER"] = spec.v_l_over_er;
  j["L_over_a"] = spec.l_over_a;
  j["eta0"] = etas.eta0;
  j["eta_a_over_a"] = etas.eta_a;
  j["eta_b_over_a"] = etas.eta_b;
  j["Delta_over_ER"] = wp.delta;
  j["t_a_over_ER"] = wp.t_a;
  j["t_b_over_ER"] = wp.t_b;
  return j.dump(2);
}

WannierResult compute_wannier_coefficients(const LatticeSpec& spec) {
  WannierResult r;
  r.spec = spec;
  const auto bands = solve_band_structure(spec, 2, spec.grid.periods);
  r.wp = build_wannier(bands);
  r.etas = compute_etas(r.wp, spec.l_over_a);
  return r;
}

}  // namespace spinphonon
