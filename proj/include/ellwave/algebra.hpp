#pragma once

// Exact polynomials in the per-site Jacobi values s_i, c_i, d_i of a lattice,
// with an explicit power of m carried on each term, closed under d/dxi.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ellwave/elliptic.hpp"

namespace ellwave {

// Largest exponent of any single s_i, c_i or d_i. Hitting it means runaway
// symbolic growth, which is a bug.
inline constexpr int kMaxExponent = 16;

struct SitePowers {
  int site = 1;  // 1-based
  std::uint8_t s = 0;
  std::uint8_t c = 0;
  std::uint8_t d = 0;

  auto operator<=>(const SitePowers&) const = default;
};

struct Monomial {
  double coeff = 0.0;
  int m_power = 0;
  std::vector<SitePowers> sites;  // sorted by site, no all-zero entries

  bool operator==(const Monomial&) const = default;
};

enum class Var { s, c, d };

class EllipticPoly {
 public:
  EllipticPoly() = default;
  explicit EllipticPoly(LatticeShape shape) : shape_(shape) {}

  static EllipticPoly constant(LatticeShape shape, double value);
  // coeff * m^m_power * var_site^power
  static EllipticPoly variable(LatticeShape shape, Var var, int site, int power = 1,
                               double coeff = 1.0, int m_power = 0);
  static EllipticPoly from_terms(LatticeShape shape, std::vector<Monomial> terms);

  const LatticeShape& shape() const noexcept { return shape_; }
  const std::vector<Monomial>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  int max_exponent() const noexcept;
  int max_m_power() const noexcept;

  EllipticPoly& operator+=(const EllipticPoly& other);
  EllipticPoly& operator-=(const EllipticPoly& other);
  EllipticPoly& operator*=(const EllipticPoly& other);
  EllipticPoly& operator*=(double factor);

  friend EllipticPoly operator+(EllipticPoly a, const EllipticPoly& b) { return a += b; }
  friend EllipticPoly operator-(EllipticPoly a, const EllipticPoly& b) { return a -= b; }
  friend EllipticPoly operator*(EllipticPoly a, const EllipticPoly& b) { return a *= b; }
  friend EllipticPoly operator*(EllipticPoly a, double k) { return a *= k; }
  friend EllipticPoly operator*(double k, EllipticPoly a) { return a *= k; }

  bool operator==(const EllipticPoly&) const = default;

 private:
  void canonicalize();

  LatticeShape shape_{};
  std::vector<Monomial> terms_;
};

// Throw Errc::usage when the lattice shapes differ.
EllipticPoly poly_add(const EllipticPoly& a, const EllipticPoly& b);
EllipticPoly poly_mul(const EllipticPoly& a, const EllipticPoly& b);

// d/dxi with s' = c d, c' = -s d, d' = -m s c at every site.
EllipticPoly differentiate(const EllipticPoly& a);
EllipticPoly differentiate(const EllipticPoly& a, int order);

// Sum over terms, in canonical order, of coeff * m^m_power * prod s^a c^b d^e.
double evaluate(const EllipticPoly& a, double base, Modulus m);

// Same, against precomputed site values. When `magnitude` is non-null it
// receives the sum of |term|, the scale against which rounding is judged.
template <class T>
T evaluate_on(const EllipticPoly& a, std::span<const BasicTriple<T>> sites, const T& m,
              T* magnitude = nullptr);

// Plain text such as "-2*m*s1*c1*d1 + 0.5*d2^2"; "0" for the empty polynomial.
std::string to_string(const EllipticPoly& a);
EllipticPoly parse_poly(std::string_view text, LatticeShape shape);

}  // namespace ellwave
