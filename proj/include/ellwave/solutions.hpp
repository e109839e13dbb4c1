#pragma once

// Periodic travelling-wave families of the KdV and mKdV equations built from
// lattice sums and products of Jacobi functions, their velocities, and the
// cyclic-identity constants those velocities depend on.

#include <map>
#include <optional>
#include <shared_mutex>
#include <string_view>
#include <tuple>

#include "ellwave/algebra.hpp"
#include "ellwave/error.hpp"

namespace ellwave {

enum class WaveFamily {
  kdv_dn2_sum,                 // u = -2 a^2 sum d_i^2 + beta a^2
  mkdv1_sn_sum_odd,            // v = +-sqrt(m) a sum sn~_i, odd p
  mkdv1_sn_product_even,       // v = +-a m s1 s2, +-a m (1 - sqrt(1-m)) s1 s2 s3 s4
  mkdv2_dn_sum,                // v = +-a sum d_i
  mkdv2_cn_sum_odd,            // v = +-sqrt(m) a sum cn~_i, odd p
  mkdv2_dn_alternating_even,   // v = +-a sum_{i odd} (d_i - d_{i+1}), even p
  miura_of_mkdv1,              // u = v^2 +- v_x for v of a type-1 family
};

// Which equation a family solves.
enum class Equation {
  kdv,    // u_t - 6 u u_x + u_xxx = 0
  mkdv1,  // v_t - 6 v^2 v_x + v_xxx = 0
  mkdv2,  // v_t + 6 v^2 v_x + v_xxx = 0
};

enum class ConstantKind { A, B, C, D, E, F, G, H, I, J, L, Q };

std::string_view family_name(WaveFamily family) noexcept;
std::optional<WaveFamily> family_from_name(std::string_view name) noexcept;
std::string_view constant_name(ConstantKind kind) noexcept;
std::optional<ConstantKind> constant_from_name(std::string_view name) noexcept;

Equation equation_of(WaveFamily family) noexcept;
Spacing spacing_of(WaveFamily family) noexcept;

// True when p is allowed for the family (parity, and {2, 4} for the product family).
bool family_accepts(WaveFamily family, int p) noexcept;
bool constant_accepts(ConstantKind kind, int p) noexcept;

struct WaveSolution {
  WaveFamily family = WaveFamily::kdv_dn2_sum;
  int p = 1;
  double alpha = 1.0;
  double beta = 0.0;
  int sign = 1;
  Modulus m{0.0};
  double velocity = 0.0;
  EllipticPoly profile;  // waveform as a function of xi, alpha and beta folded in
  // For Miura outputs: the mKdV family and sign the wave was transformed from.
  WaveFamily source_family = WaveFamily::kdv_dn2_sum;
  int source_sign = 1;
};

struct IdentityConstant {
  ConstantKind kind = ConstantKind::A;
  int p = 1;
  Modulus m{0.0};
  double value = 0.0;
  double constancy_dev = 0.0;
  int samples_used = 0;
  bool continued = false;  // value continued from m >= 0.05 (degenerate denominators)
};

inline constexpr int kDefaultSamples = 32;
inline constexpr double kDefaultConstancyTol = 1e-9;

// sn^2(2K(m)/3, m).
double constant_q(Modulus m);

// Samples the defining identity of `kind` at base arguments
// xi_k = (0.137 + 0.61803 k) K(m), k = 0..samples-1, in binary128. Returns the
// median sample and the largest deviation from it.
//
// Samples whose defining denominator is below 1e-6 of the largest one (or is
// lost in rounding) are skipped. For m < 0.05 where every sample is skipped
// (A, C, H and L degenerate as m -> 0) the value is continued from
// Chebyshev nodes on [0.05, 0.5].
//
// Errors: Errc::usage for an illegal (kind, p); Errc::divergence for m too
// close to 1; Errc::degenerate_sampling with fewer than 3 usable samples;
// Errc::non_identity when constancy_dev > tol. The last one is thrown as
// NonIdentityError so callers can still report the measured constant.
IdentityConstant extract_constant(ConstantKind kind, int p, Modulus m,
                                  int samples = kDefaultSamples,
                                  double tol = kDefaultConstancyTol);

class NonIdentityError : public Error {
 public:
  NonIdentityError(const std::string& what, IdentityConstant measured)
      : Error(Errc::non_identity, what), measured_(measured) {}
  const IdentityConstant& measured() const noexcept { return measured_; }

 private:
  IdentityConstant measured_;
};

// Memoizes extract_constant per (kind, p, m, samples). Concurrent readers,
// single writer per insertion.
class ConstantCache {
 public:
  IdentityConstant get(ConstantKind kind, int p, Modulus m, int samples = kDefaultSamples);
  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<ConstantKind, int, double, int>;
  mutable std::shared_mutex mutex_;
  std::map<Key, IdentityConstant> entries_;
};

ConstantCache& shared_constant_cache();

// Closed forms stated for special (p, m): A(p,0), A(p,1), A(3,m), A(4,m),
// B/C at p = 1, 3, the m = 0 values of E..L, their p = 2, 3, 4 forms, and Q.
std::optional<double> closed_form(ConstantKind kind, int p, Modulus m);

// b_p or q_p. beta only affects the KdV family. At p = 1 every constant is an
// empty sum, so m = 1 is allowed there.
double velocity(WaveFamily family, int p, Modulus m, double beta = 0.0);

WaveSolution build(WaveFamily family, int p, double alpha, double beta, int sign, Modulus m);

// u = v^2 + sign * v_x with v_x = alpha dv/dxi; velocity carried over.
WaveSolution miura(const WaveSolution& v, int sign);

// xi = alpha (x - velocity alpha^2 t).
double travelling_coordinate(const WaveSolution& w, double x, double t);
double eval_solution(const WaveSolution& w, double x, double t);

}  // namespace ellwave
