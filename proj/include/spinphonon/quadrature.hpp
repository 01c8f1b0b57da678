#pragma once

#include <vector>

namespace spinphonon {

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussLegendre {
  std::vector<double> x, w;
  explicit GaussLegendre(int n);

  // Integrate f over [a, b].
  template <class F>
  double integrate(double a, double b, F&& f) const {
    const double c = 0.5 * (b - a), m = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f(m + c * x[i]);
    return c * s;
  }
};

const GaussLegendre& gl128();
const GaussLegendre& gl256();

}  // namespace spinphonon
