#include "ellwave/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "ellwave/error.hpp"

namespace ellwave {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "domain";
    case Errc::divergence: return "divergence";
    case Errc::usage: return "usage";
    case Errc::degenerate_sampling: return "degenerate_sampling";
    case Errc::non_identity: return "non_identity";
    case Errc::parse: return "parse";
  }
  return "unknown";
}

Modulus::Modulus(double m) : m_(m) {
  if (!(m >= 0.0 && m <= 1.0)) {
    throw Error(Errc::domain, "elliptic parameter m=" + std::to_string(m) + " outside [0, 1]");
  }
}

namespace {

using std::abs;
using std::asin;
using std::cos;
using std::cosh;
using std::round;
using std::sin;
using std::sqrt;
using std::tanh;

template <class T>
void check_parameter(const T& m) {
  if (!(m >= 0 && m <= 1)) {
    throw Error(Errc::domain,
                "elliptic parameter m=" + std::to_string(to_double(m)) + " outside [0, 1]");
  }
}

// Up to 2^-113 the AGM converges in well under 16 halvings for m <= 1 - 1e-18.
constexpr int kMaxAgmSteps = 40;

template <class T>
struct AgmLadder {
  std::array<T, kMaxAgmSteps + 1> a;
  std::array<T, kMaxAgmSteps + 1> c;
  int steps = 0;
};

// Descending AGM started from (1, sqrt(1-m), sqrt(m)). c_n is propagated as
// c_{n-1}^2 / (4 a_n), which avoids the cancellation in (a - b) / 2.
template <class T>
AgmLadder<T> agm_ladder(const T& m) {
  const T eps = std::numeric_limits<T>::epsilon();
  AgmLadder<T> ladder;
  T a = 1;
  T b = sqrt(T(1) - m);
  T c = sqrt(m);
  ladder.a[0] = a;
  ladder.c[0] = c;
  int n = 0;
  while (abs(c) > eps * a && n < kMaxAgmSteps) {
    const T a_next = (a + b) / 2;
    const T b_next = sqrt(a * b);
    c = c * c / (4 * a_next);
    a = a_next;
    b = b_next;
    ++n;
    ladder.a[n] = a;
    ladder.c[n] = c;
  }
  ladder.steps = n;
  return ladder;
}

template <class T>
T quarter_period(const T& m) {
  const AgmLadder<T> ladder = agm_ladder(m);
  return boost::math::constants::half_pi<T>() / ladder.a[ladder.steps];
}

template <class T>
BasicTriple<T> jacobi_with_period(T u, const T& m, const T& k) {
  if (m == 0) return {sin(u), cos(u), T(1)};

  // Reduce into [-2K, 2K].
  const T four_k = 4 * k;
  u -= four_k * round(u / four_k);

  const AgmLadder<T> ladder = agm_ladder(m);
  T scale = 1;
  for (int i = 0; i < ladder.steps; ++i) scale *= 2;
  T phi = scale * ladder.a[ladder.steps] * u;
  for (int n = ladder.steps; n > 0; --n) {
    phi = (phi + asin(ladder.c[n] / ladder.a[n] * sin(phi))) / 2;
  }
  const T s = sin(phi);
  const T c = cos(phi);
  // dn from cn^2 + (1 - m) sn^2: a sum of non-negative terms, accurate near m = 1.
  const T d = sqrt(c * c + (T(1) - m) * s * s);
  return {s, c, d};
}

template <class T>
T spacing_for(LatticeShape shape, const T& k) {
  const int multiple = shape.spacing == Spacing::half ? 2 : 4;
  return T(multiple) * k / T(shape.p);
}

template <class T>
void check_lattice(LatticeShape shape, const T& m) {
  if (shape.p < 1) throw Error(Errc::usage, "lattice needs p >= 1, got " + std::to_string(shape.p));
  check_parameter(m);
  if (shape.p > 1 && to_double(m) > 1.0 - kLatticeEpsilon) {
    throw Error(Errc::divergence, "lattice with p=" + std::to_string(shape.p) +
                                      " needs m <= 1 - 1e-9 (K(m) diverges), got m=" +
                                      std::to_string(to_double(m)));
  }
}

}  // namespace

template <class T>
T complete_k_as(const T& m) {
  check_parameter(m);
  if (m == 1) throw Error(Errc::divergence, "K(m) diverges at m = 1");
  return quarter_period(m);
}

template <class T>
BasicTriple<T> jacobi_as(const T& u, const T& m) {
  check_parameter(m);
  if (!(abs(u) < std::numeric_limits<T>::infinity())) {
    throw Error(Errc::domain, "jacobi: argument must be finite");
  }
  if (m == 1) {
    const T sech = 1 / cosh(u);
    return {tanh(u), sech, sech};
  }
  return jacobi_with_period(u, m, quarter_period(m));
}

template <class T>
std::vector<BasicTriple<T>> lattice_triples_as(LatticeShape shape, const T& base, const T& m) {
  check_lattice(shape, m);
  std::vector<BasicTriple<T>> out;
  out.reserve(static_cast<std::size_t>(shape.p));
  out.push_back(jacobi_as(base, m));
  if (shape.p == 1) return out;
  const T k = quarter_period(m);
  const T step = spacing_for(shape, k);
  for (int i = 1; i < shape.p; ++i) {
    out.push_back(jacobi_with_period(base + T(i) * step, m, k));
  }
  return out;
}

template <class T>
LatticeShifts<T> lattice_shifts_as(LatticeShape shape, const T& m) {
  LatticeShifts<T> out;
  out.shape = shape;
  out.m = m;
  out.offsets = lattice_triples_as(shape, T(0), m);
  return out;
}

template <class T>
std::vector<BasicTriple<T>> lattice_triples_as(const LatticeShifts<T>& shifts, const T& base) {
  const T& m = shifts.m;
  const auto b = jacobi_as(base, m);
  std::vector<BasicTriple<T>> out;
  out.reserve(shifts.offsets.size());
  out.push_back(b);
  for (std::size_t i = 1; i < shifts.offsets.size(); ++i) {
    const auto& o = shifts.offsets[i];
    const T ss = b.s * o.s;
    const T inv = 1 / (1 - m * ss * ss);
    out.push_back({(b.s * o.c * o.d + o.s * b.c * b.d) * inv,
                   (b.c * o.c - ss * b.d * o.d) * inv,
                   (b.d * o.d - m * ss * b.c * o.c) * inv});
  }
  return out;
}

template double complete_k_as<double>(const double&);
template Quad complete_k_as<Quad>(const Quad&);
template BasicTriple<double> jacobi_as<double>(const double&, const double&);
template BasicTriple<Quad> jacobi_as<Quad>(const Quad&, const Quad&);
template std::vector<BasicTriple<double>> lattice_triples_as<double>(LatticeShape, const double&,
                                                                     const double&);
template std::vector<BasicTriple<Quad>> lattice_triples_as<Quad>(LatticeShape, const Quad&,
                                                                 const Quad&);
template LatticeShifts<double> lattice_shifts_as<double>(LatticeShape, const double&);
template LatticeShifts<Quad> lattice_shifts_as<Quad>(LatticeShape, const Quad&);
template std::vector<BasicTriple<double>> lattice_triples_as<double>(const LatticeShifts<double>&,
                                                                     const double&);
template std::vector<BasicTriple<Quad>> lattice_triples_as<Quad>(const LatticeShifts<Quad>&,
                                                                 const Quad&);

double complete_k(Modulus m) { return complete_k_as(m.value()); }

EllipticTriple jacobi(double u, Modulus m) { return jacobi_as(u, m.value()); }

std::vector<EllipticTriple> lattice_triples(const Lattice& lattice) {
  return lattice_triples_as(lattice.shape, lattice.base, lattice.m.value());
}

double lattice_spacing(LatticeShape shape, Modulus m) {
  check_lattice(shape, m.value());
  if (shape.p == 1) return 0.0;
  return spacing_for(shape, quarter_period(m.value()));
}

}  // namespace ellwave
