#include "ellwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <type_traits>

#include "ellwave/error.hpp"

namespace ellwave {

namespace {

// Below this ratio of |largest term| to the monomial rounding scale the double
// result is not trusted and the point is redone in binary128.
constexpr double kDoubleConditioning = 1e-3;
// In binary128, terms smaller than this fraction of the rounding scale are
// indistinguishable from zero; the relative residual is floored there.
constexpr double kQuadFloor = 1e-24;

template <class T>
struct TermValues {
  T transport;
  T nonlinear;
  T dispersion;
  T bound;  // largest term magnitude the monomials could produce
};

// Sum of |coeff m^k|: the size of the polynomial with every |s|, |c|, |d| at
// its maximum of 1. Site values carry absolute (not relative) rounding error,
// so this rather than the sum of |terms| sets the rounding scale.
double coefficient_norm(const EllipticPoly& poly, double m) {
  double out = 0.0;
  for (const auto& t : poly.terms()) out += std::fabs(t.coeff) * std::pow(m, t.m_power);
  return out;
}

template <class T>
TermValues<T> terms_at(const WaveSolution& w, const ProfileJet& jet, const T& xi) {
  using std::abs;
  const T m = w.m.value();
  std::vector<BasicTriple<T>> sites;
  if constexpr (std::is_same_v<T, Quad>) {
    sites = lattice_triples_as<Quad>(jet.quad_shifts, xi);
  } else {
    sites = lattice_triples_as<T>(jet.w.shape(), xi, m);
  }
  const T v0 = evaluate_on<T>(jet.w, sites, m);
  const T v1 = evaluate_on<T>(jet.w1, sites, m);
  const T v3 = evaluate_on<T>(jet.w3, sites, m);
  const T mag0 = coefficient_norm(jet.w, w.m.value());
  const T mag1 = coefficient_norm(jet.w1, w.m.value());
  const T mag3 = coefficient_norm(jet.w3, w.m.value());
  const T a = w.alpha;
  const T a3 = a * a * a;
  const T b = w.velocity;
  TermValues<T> out;
  out.transport = -b * a3 * v1;
  out.dispersion = a3 * v3;
  T nonlinear_bound;
  switch (equation_of(w.family)) {
    case Equation::kdv:
      out.nonlinear = -6 * a * v0 * v1;
      nonlinear_bound = 6 * a * mag0 * mag1;
      break;
    case Equation::mkdv1:
      out.nonlinear = -6 * a * v0 * v0 * v1;
      nonlinear_bound = 6 * a * mag0 * mag0 * mag1;
      break;
    case Equation::mkdv2:
      out.nonlinear = 6 * a * v0 * v0 * v1;
      nonlinear_bound = 6 * a * mag0 * mag0 * mag1;
      break;
  }
  out.bound = std::max({T(abs(b) * a3 * mag1), nonlinear_bound, T(a3 * mag3)});
  return out;
}

template <class T>
T largest_term(const TermValues<T>& t) {
  using std::abs;
  return std::max({T(abs(t.transport)), T(abs(t.nonlinear)), T(abs(t.dispersion))});
}

}  // namespace

ProfileJet profile_jet(const WaveSolution& w) {
  ProfileJet jet;
  jet.w = w.profile;
  jet.w1 = differentiate(w.profile);
  jet.w3 = differentiate(differentiate(jet.w1));
  jet.quad_shifts = lattice_shifts_as<Quad>(w.profile.shape(), Quad(w.m.value()));
  return jet;
}

ResidualPoint residual_point(const WaveSolution& w, const ProfileJet& jet, double xi) {
  ResidualPoint out;
  const auto d = terms_at<double>(w, jet, xi);
  const double big = largest_term(d);
  if (d.bound == 0.0) return out;  // identically zero profile
  if (big >= kDoubleConditioning * d.bound) {
    out.transport = d.transport;
    out.nonlinear = d.nonlinear;
    out.dispersion = d.dispersion;
    out.residual = d.transport + d.nonlinear + d.dispersion;
    out.relative = std::fabs(out.residual) / big;
    return out;
  }
  const auto q = terms_at<Quad>(w, jet, Quad(xi));
  const Quad r = q.transport + q.nonlinear + q.dispersion;
  const Quad scale = std::max(largest_term(q), Quad(kQuadFloor) * q.bound);
  out.transport = to_double(q.transport);
  out.nonlinear = to_double(q.nonlinear);
  out.dispersion = to_double(q.dispersion);
  out.residual = to_double(r);
  out.relative = to_double(boost::multiprecision::abs(r) / scale);
  out.extended = true;
  return out;
}

double kdv_residual(const WaveSolution& w, double xi) {
  if (equation_of(w.family) != Equation::kdv) {
    throw Error(Errc::usage, std::string(family_name(w.family)) + " is not a KdV solution");
  }
  return residual_point(w, profile_jet(w), xi).residual;
}

double mkdv_residual(const WaveSolution& w, double xi, int equation_sign) {
  const Equation e = equation_of(w.family);
  const bool matches = (e == Equation::mkdv1 && equation_sign == -1) ||
                       (e == Equation::mkdv2 && equation_sign == 1);
  if (!matches) {
    throw Error(Errc::usage, std::string(family_name(w.family)) +
                                 " does not solve the mKdV equation with sign " +
                                 std::to_string(equation_sign));
  }
  return residual_point(w, profile_jet(w), xi).residual;
}

ResidualReport residual_scan(const WaveSolution& w, double xi_min, double xi_max, int n) {
  if (n < 2) throw Error(Errc::usage, "residual scan needs at least 2 points");
  if (!(std::isfinite(xi_min) && std::isfinite(xi_max))) {
    throw Error(Errc::domain, "scan bounds must be finite");
  }
  ResidualReport report;
  report.family = w.family;
  report.p = w.p;
  report.m = w.m.value();
  report.alpha = w.alpha;
  report.beta = w.beta;
  report.sign = w.sign;
  report.grid_points = n;
  report.argmax_xi = xi_min;
  const ProfileJet jet = profile_jet(w);
  const double step = (xi_max - xi_min) / (n - 1);
  for (int i = 0; i < n; ++i) {
    const double xi = i == n - 1 ? xi_max : xi_min + i * step;
    const ResidualPoint pt = residual_point(w, jet, xi);
    report.max_abs = std::max(report.max_abs, std::fabs(pt.residual));
    if (pt.relative > report.max_rel) {
      report.max_rel = pt.relative;
      report.argmax_xi = xi;
    }
  }
  return report;
}

std::pair<double, double> scan_interval(const WaveSolution& w) {
  if (w.m.value() == 1.0) return {-10.0, 10.0};
  return {0.0, 4.0 * complete_k(w.m)};
}

double derivative_crosscheck(const WaveSolution& w, double xi) {
  using boost::multiprecision::abs;
  const ProfileJet jet = profile_jet(w);
  const Quad m = w.m.value();
  const LatticeShape shape = jet.w.shape();
  auto eval = [&](const EllipticPoly& poly, const Quad& at) {
    const auto sites = lattice_triples_as<Quad>(shape, at, m);
    return evaluate_on<Quad>(poly, sites, m);
  };
  const Quad x = xi;
  const Quad h = Quad(1e-5);
  const Quad fd1 = (eval(jet.w, x + h) - eval(jet.w, x - h)) / (2 * h);
  const Quad fd3 = (eval(jet.w, x + 2 * h) - 2 * eval(jet.w, x + h) + 2 * eval(jet.w, x - h) -
                    eval(jet.w, x - 2 * h)) /
                   (2 * h * h * h);
  const Quad sym1 = eval(jet.w1, x);
  const Quad sym3 = eval(jet.w3, x);

  Quad scale1 = abs(sym1);
  Quad scale3 = abs(sym3);
  const auto [lo, hi] = scan_interval(w);
  for (int k = 0; k < 16; ++k) {
    const Quad at = Quad(lo) + Quad(hi - lo) * (Quad(k) + Quad(0.5)) / 16;
    scale1 = std::max(scale1, Quad(abs(eval(jet.w1, at))));
    scale3 = std::max(scale3, Quad(abs(eval(jet.w3, at))));
  }
  auto rel = [](const Quad& diff, const Quad& scale) { return scale > 0 ? diff / scale : diff; };
  const Quad e1 = rel(abs(sym1 - fd1), scale1);
  const Quad e3 = rel(abs(sym3 - fd3), scale3);
  return to_double(std::max(e1, e3));
}

}  // namespace ellwave
