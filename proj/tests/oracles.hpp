#pragma once

// Reference values computed without the library: adaptive quadrature of the
// elliptic integral and bisection on it.

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

// F(phi | m) = integral_0^phi dt / sqrt(1 - m sin^2 t)
inline double incomplete_f(double phi, double m) {
  auto f = [m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, phi, 20, 1e-15);
}

inline double quarter_period(double m) { return incomplete_f(M_PI / 2, m); }

struct Triple {
  double s, c, d;
};

// Amplitude phi with F(phi | m) = u, 0 <= u <= K(m), by bisection.
inline Triple jacobi_by_inversion(double u, double m) {
  double lo = 0.0, hi = M_PI / 2;
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (incomplete_f(mid, m) < u ? lo : hi) = mid;
  }
  const double phi = 0.5 * (lo + hi);
  return {std::sin(phi), std::cos(phi), std::sqrt(1.0 - m * std::sin(phi) * std::sin(phi))};
}

}  // namespace oracle
