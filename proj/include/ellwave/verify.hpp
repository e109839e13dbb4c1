#pragma once

// PDE residuals of constructed waves. The travelling-wave reduction is exact:
// with u(x, t) = W(xi), xi = alpha (x - b alpha^2 t),
//     u_t = -b alpha^3 W',   u_x = alpha W',   u_xxx = alpha^3 W''',
// so a residual is a polynomial in the lattice values, evaluated pointwise.

#include "ellwave/solutions.hpp"

namespace ellwave {

struct ResidualReport {
  WaveFamily family = WaveFamily::kdv_dn2_sum;
  int p = 1;
  double m = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
  int sign = 1;
  double max_abs = 0.0;
  double max_rel = 0.0;  // max over points of |R| / (largest PDE term at that point)
  double argmax_xi = 0.0;
  int grid_points = 0;
};

// The three PDE terms at one point: transport (time derivative), nonlinear
// and dispersive. residual = their sum.
struct ResidualPoint {
  double transport = 0.0;
  double nonlinear = 0.0;
  double dispersion = 0.0;
  double residual = 0.0;
  double relative = 0.0;
  bool extended = false;  // evaluated in binary128
};

// Symbolic derivatives of a profile, reusable across many points.
struct ProfileJet {
  EllipticPoly w;
  EllipticPoly w1;
  EllipticPoly w3;
  LatticeShifts<Quad> quad_shifts;  // for the binary128 pass
};

ProfileJet profile_jet(const WaveSolution& w);

// Residual at xi. Evaluated in double, and again in binary128 when the terms
// are small against the rounding scale of their monomials.
ResidualPoint residual_point(const WaveSolution& w, const ProfileJet& jet, double xi);

// -b a^3 W' - 6 a W W' + a^3 W'''. Errc::usage for non-KdV families.
double kdv_residual(const WaveSolution& w, double xi);

// -q a^3 V' + equation_sign 6 a V^2 V' + a^3 V'''; equation_sign is -1 for
// type 1 and +1 for type 2 and must match the family (Errc::usage otherwise).
double mkdv_residual(const WaveSolution& w, double xi, int equation_sign);

// n >= 2 uniform points on [xi_min, xi_max].
ResidualReport residual_scan(const WaveSolution& w, double xi_min, double xi_max, int n);

// An interval containing at least one full period of the profile: [0, 4K(m)]
// for m < 1, [-10, 10] for the m = 1 solitary limit.
std::pair<double, double> scan_interval(const WaveSolution& w);

// Compares symbolic W' and W''' against a central difference and the
// five-point third-difference stencil (h = 1e-5, binary128). Each discrepancy
// is relative to the largest |W^(k)| seen at xi and at 16 points across the
// scan interval; absolute when that is zero. Returns the larger of the two.
double derivative_crosscheck(const WaveSolution& w, double xi);

}  // namespace ellwave
