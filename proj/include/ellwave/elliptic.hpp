#pragma once

// Complete elliptic integral K(m) and the Jacobi functions sn, cn, dn.
//
// Throughout, m is the *parameter* (m = k^2), not the modulus k. The
// fundamental relations are
//     sn^2 + cn^2 = 1,      dn^2 + m sn^2 = 1,
// and the quarter period is K(m) = integral_0^{pi/2} dt / sqrt(1 - m sin^2 t).

#include <compare>
#include <vector>

#include "ellwave/precision.hpp"

namespace ellwave {

// Lattices with p >= 2 need a finite K(m); they are restricted to m <= 1 - this.
inline constexpr double kLatticeEpsilon = 1e-9;

class Modulus {
 public:
  // Throws Error(Errc::domain) unless 0 <= m <= 1.
  explicit Modulus(double m);

  double value() const noexcept { return m_; }
  auto operator<=>(const Modulus&) const = default;

 private:
  double m_;
};

template <class T>
struct BasicTriple {
  T s;
  T c;
  T d;
};
using EllipticTriple = BasicTriple<double>;

enum class Spacing {
  half,  // sites 2K(m)/p apart
  full,  // sites 4K(m)/p apart
};

// The part of a lattice a symbolic polynomial is written against.
struct LatticeShape {
  int p = 1;
  Spacing spacing = Spacing::half;

  auto operator<=>(const LatticeShape&) const = default;
};

struct Lattice {
  LatticeShape shape;
  double base = 0.0;
  Modulus m{0.0};
};

// K(m) by the arithmetic-geometric mean. Errc::divergence at m = 1,
// Errc::domain outside [0, 1].
double complete_k(Modulus m);

// (sn, cn, dn)(u | m) by the descending Landen / AGM scheme. m = 1 uses the
// closed forms (tanh, sech, sech). Errc::domain for non-finite u.
EllipticTriple jacobi(double u, Modulus m);

// Site i (1-based) is evaluated at base + (i - 1) * spacing. Site 1 is
// jacobi(base, m).
std::vector<EllipticTriple> lattice_triples(const Lattice& lattice);

// Distance between neighbouring sites.
double lattice_spacing(LatticeShape shape, Modulus m);

// Precision-generic kernels; instantiated for double and Quad. The modulus is
// validated the same way as Modulus.
template <class T>
T complete_k_as(const T& m);

template <class T>
BasicTriple<T> jacobi_as(const T& u, const T& m);

template <class T>
std::vector<BasicTriple<T>> lattice_triples_as(LatticeShape shape, const T& base, const T& m);

// Triples at the site offsets (i - 1) * spacing, computed once so a lattice at
// many bases costs one jacobi_as call plus the addition theorem per site.
template <class T>
struct LatticeShifts {
  LatticeShape shape{};
  T m{};
  std::vector<BasicTriple<T>> offsets;
};

template <class T>
LatticeShifts<T> lattice_shifts_as(LatticeShape shape, const T& m);

template <class T>
std::vector<BasicTriple<T>> lattice_triples_as(const LatticeShifts<T>& shifts, const T& base);

}  // namespace ellwave
