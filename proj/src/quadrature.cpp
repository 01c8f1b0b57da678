#include "spinphonon/quadrature.hpp"

#include <cmath>

namespace spinphonon {

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
  // Newton iteration on Legendre polynomials, nodes seeded by the Chebyshev
  // approximation; standard Golub-Welsch-free construction.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

const GaussLegendre& gl128() {
  static const GaussLegendre g(128);
  return g;
}

const GaussLegendre& gl256() {
  static const GaussLegendre g(256);
  return g;
}

}  // namespace spinphonon
