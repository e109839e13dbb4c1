#include "doctest.h"

#include <cmath>
#include <optional>
#include <vector>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "ellwave/error.hpp"
#include "ellwave/solutions.hpp"
#include "oracles.hpp"

using namespace ellwave;

namespace {

struct Site {
  double s, c, d;
};

// Lattice values from Boost's Jacobi functions and a quadrature K.
std::vector<Site> boost_lattice(int p, bool full, double base, double m) {
  const double step = (full ? 4 : 2) * oracle::quarter_period(m) / p;
  std::vector<Site> out;
  for (int i = 0; i < p; ++i) {
    Site t{};
    t.s = boost::math::jacobi_elliptic(std::sqrt(m), base + i * step, &t.c, &t.d);
    out.push_back(t);
  }
  return out;
}

double oracle_q(double m) {
  double c, d;
  const double s = boost::math::jacobi_elliptic(std::sqrt(m), 2 * oracle::quarter_period(m) / 3, &c, &d);
  return s * s;
}

// sum d_i^2 sum_{j != i} s_j c_j d_j  /  sum s_i c_i d_i, in 50 digits.
// Numerator and denominator are both O(q^p), so double is not enough.
double oracle_a(int p, double m, double base) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big k = sqrt(Big(m));
  const Big step = 2 * boost::math::ellint_1(k) / p;
  std::vector<Big> s(p), c(p), d(p);
  for (int i = 0; i < p; ++i) s[i] = boost::math::jacobi_elliptic(k, Big(base) + i * step, &c[i], &d[i]);
  Big num = 0, den = 0;
  for (int i = 0; i < p; ++i) {
    den += s[i] * c[i] * d[i];
    for (int j = 0; j < p; ++j) {
      if (j != i) num += d[i] * d[i] * s[j] * c[j] * d[j];
    }
  }
  return static_cast<double>(num / den);
}

double value(ConstantKind kind, int p, double m) { return extract_constant(kind, p, Modulus(m)).value; }

}  // namespace

TEST_CASE("Q") {
  CHECK(constant_q(Modulus(0.0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(std::fabs(constant_q(Modulus(0.5)) - oracle_q(0.5)) < 1e-13);
  for (double m = 0.0; m < 1.0; m += 0.05) {
    const double q = constant_q(Modulus(m));
    CHECK(q > 0);
    CHECK(q < 1);
  }
  CHECK_THROWS_AS(constant_q(Modulus(1.0)), Error);
}

TEST_CASE("A against a direct evaluation with Boost") {
  for (int p = 2; p <= 7; ++p) {
    for (double m : {0.2, 0.5, 0.8}) {
      CAPTURE(p);
      CAPTURE(m);
      CHECK(std::fabs(value(ConstantKind::A, p, m) - oracle_a(p, m, 0.3141)) < 1e-9);
    }
  }
}

TEST_CASE("A closed forms") {
  for (int p = 1; p <= 8; ++p) {
    const double expected = -(p - 1.0) * (p - 2.0) / 3.0;
    CAPTURE(p);
    CHECK(std::fabs(value(ConstantKind::A, p, 0.0) - expected) < 1e-9);
  }
  for (double m : {0.2, 0.5, 0.8}) {
    CHECK(std::fabs(value(ConstantKind::A, 3, m) - (2 - 2 / oracle_q(m))) < 1e-9);
  }
  CHECK(std::fabs(value(ConstantKind::A, 4, 0.5) + 2 * std::sqrt(0.5)) < 1e-9);
}

TEST_CASE("A decays to 0 as m approaches 1") {
  for (int p = 2; p <= 7; ++p) {
    CAPTURE(p);
    CHECK(std::fabs(value(ConstantKind::A, p, 1 - 1e-9) - oracle_a(p, 1 - 1e-9, 0.3141)) < 1e-9);
    double prev = INFINITY;
    for (double gap : {1e-3, 1e-5, 1e-7, 1e-9}) {
      const double a = std::fabs(value(ConstantKind::A, p, 1 - gap));
      CHECK(a < prev);
      prev = a;
    }
    CHECK(prev < 0.05);
  }
  CHECK(std::fabs(value(ConstantKind::A, 4, 1 - 1e-9)) < 1e-3);
}

TEST_CASE("B and C at p = 3") {
  const double q = oracle_q(0.4);
  CHECK(std::fabs(value(ConstantKind::B, 3, 0.4) + 0.4 * q) < 1e-9);
  CHECK(std::fabs(value(ConstantKind::C, 3, 0.4) + 1 / q) < 1e-9);
  CHECK(value(ConstantKind::B, 1, 0.4) == 0.0);
  CHECK(value(ConstantKind::C, 1, 0.4) == 0.0);
}

TEST_CASE("E..L values at m = 0") {
  for (int p = 1; p <= 6; ++p) {
    const double pd = p;
    CAPTURE(p);
    CHECK(std::fabs(value(ConstantKind::E, p, 0.0) - pd * (pd - 1) / 2) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::F, p, 0.0) - (pd - 1) * (pd - 2) / 6) < 1e-9);
    if (p % 2) {
      CHECK(std::fabs(value(ConstantKind::G, p, 0.0)) < 1e-9);
      CHECK(std::fabs(value(ConstantKind::H, p, 0.0) - (pd * pd - 1) / 6) < 1e-9);
    } else {
      CHECK(std::fabs(value(ConstantKind::I, p, 0.0) - pd * pd / 4) < 1e-9);
      CHECK(std::fabs(value(ConstantKind::J, p, 0.0) - pd * (pd - 2) / 4) < 1e-9);
      CHECK(std::fabs(value(ConstantKind::L, p, 0.0) - (pd - 1) * (pd - 2) / 6) < 1e-9);
    }
  }
}

TEST_CASE("small-p closed forms at arbitrary m") {
  for (int k = 1; k <= 9; ++k) {
    const double m = 0.1 * k;
    const double q = oracle_q(m);
    const double r = std::pow(1 - m, 0.25);
    CAPTURE(m);
    CHECK(std::fabs(value(ConstantKind::E, 2, m) - std::sqrt(1 - m)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::I, 2, m) - std::sqrt(1 - m)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::F, 2, m)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::J, 2, m)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::L, 2, m)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::E, 3, m) - (1 - m * q + 2 * std::sqrt(1 - m * q))) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::F, 3, m) - (1 - q) / q) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::G, 3, m) + m * (1 - m) * q / (1 - m * q)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::H, 3, m) - (1 - m * q) / q) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::E, 4, m) - 2 * r * (1 + r + r * r)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::F, 4, m) - r * r) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::L, 4, m) - r * r) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::I, 4, m) - 2 * r * (1 + r * r)) < 1e-9);
    CHECK(std::fabs(value(ConstantKind::J, 4, m) - 2 * r * r) < 1e-9);
  }
  CHECK(std::fabs(value(ConstantKind::E, 2, 0.75) - 0.5) < 1e-9);
}

TEST_CASE("E..L decay to 0 as m approaches 1") {
  for (int p : {2, 3, 4, 5, 6}) {
    for (auto kind : {ConstantKind::E, ConstantKind::F, ConstantKind::G, ConstantKind::H,
                      ConstantKind::I, ConstantKind::J, ConstantKind::L}) {
      if (!constant_accepts(kind, p)) continue;
      CAPTURE(p);
      CAPTURE(constant_name(kind));
      double prev = INFINITY;
      for (double gap : {1e-3, 1e-5, 1e-7, 1e-9}) {
        const double v = std::fabs(value(kind, p, 1 - gap));
        CHECK((v < prev || v == 0.0));
        prev = v;
      }
      CHECK(prev < 0.1);
    }
  }
  // At p = 4 the decay is (1-m)^(1/4), so 1e-9 still leaves about 1e-2.
  const double r = std::pow(1e-9, 0.25);
  CHECK(std::fabs(value(ConstantKind::E, 4, 1 - 1e-9) - 2 * r * (1 + r + r * r)) < 1e-9);
  CHECK(std::fabs(value(ConstantKind::F, 2, 1 - 1e-9)) < 1e-3);
}

TEST_CASE("closed_form table agrees with extraction") {
  for (auto kind : {ConstantKind::A, ConstantKind::B, ConstantKind::C, ConstantKind::E, ConstantKind::F,
                    ConstantKind::G, ConstantKind::H, ConstantKind::I, ConstantKind::J, ConstantKind::L}) {
    for (int p = 1; p <= 6; ++p) {
      if (!constant_accepts(kind, p)) continue;
      for (double m : {0.0, 0.3, 0.7}) {
        const auto cf = closed_form(kind, p, Modulus(m));
        if (!cf) continue;
        CAPTURE(constant_name(kind));
        CAPTURE(p);
        CAPTURE(m);
        CHECK(std::fabs(*cf - value(kind, p, m)) < 1e-9);
      }
    }
  }
  CHECK_FALSE(closed_form(ConstantKind::D, 2, Modulus(0.5)).has_value());
  CHECK_FALSE(closed_form(ConstantKind::A, 5, Modulus(0.5)).has_value());
  CHECK(*closed_form(ConstantKind::A, 5, Modulus(1.0)) == 0.0);
}

TEST_CASE("D is a finite constant") {
  const auto d = extract_constant(ConstantKind::D, 2, Modulus(0.5));
  CHECK(std::isfinite(d.value));
  CHECK(d.constancy_dev <= 1e-9);
  CHECK(d.samples_used >= 3);
}

TEST_CASE("constancy across the parameter grid") {
  struct Family {
    ConstantKind kind;
    std::vector<int> ps;
  };
  const std::vector<Family> grid = {
      {ConstantKind::A, {1, 2, 3, 4, 5, 6, 7, 8}}, {ConstantKind::B, {1, 3, 5}}, {ConstantKind::C, {1, 3, 5}},
      {ConstantKind::D, {2, 4}},     {ConstantKind::E, {1, 2, 3, 4, 5, 6}},   {ConstantKind::F, {1, 2, 3, 4, 5, 6}},
      {ConstantKind::G, {1, 3, 5}},  {ConstantKind::H, {1, 3, 5}},            {ConstantKind::I, {2, 4, 6}},
      {ConstantKind::J, {2, 4, 6}},  {ConstantKind::L, {2, 4, 6}}};
  for (const auto& f : grid) {
    for (int p : f.ps) {
      for (int k = 1; k <= 9; ++k) {
        const auto c = extract_constant(f.kind, p, Modulus(0.1 * k));
        CAPTURE(constant_name(f.kind));
        CAPTURE(p);
        CHECK(c.constancy_dev <= 1e-9);
      }
    }
  }
}

TEST_CASE("sn-sum identity with the B and C constants") {
  for (int p : {1, 3, 5}) {
    for (double m : {0.2, 0.6, 0.9}) {
      const double b = value(ConstantKind::B, p, m);
      const double c = value(ConstantKind::C, p, m);
      for (double base : {0.11, 1.37, 2.9}) {
        const auto t = boost_lattice(p, true, base, m);
        double sum_cd = 0, pairs = 0, lhs = 0, scale = 0;
        for (int i = 0; i < p; ++i) sum_cd += t[i].c * t[i].d;
        for (int i = 0; i < p; ++i) {
          for (int j = i + 1; j < p; ++j) pairs += t[i].s * t[j].s;
          for (int j = 0; j < p; ++j) {
            if (j == i) continue;
            lhs += m * t[i].s * t[i].s * t[j].c * t[j].d;
            scale += std::fabs(m * t[i].s * t[i].s * t[j].c * t[j].d);
          }
        }
        lhs += 2 * m * pairs * sum_cd;
        const double rhs = (b - c) * sum_cd;
        CAPTURE(p);
        CAPTURE(m);
        CHECK(std::fabs(lhs - rhs) <= 1e-9 * std::max(1.0, scale));
      }
    }
  }
}

TEST_CASE("illegal constants and sampling errors") {
  auto code = [](ConstantKind k, int p, double m, int samples) -> std::optional<Errc> {
    try {
      extract_constant(k, p, Modulus(m), samples);
    } catch (const Error& e) {
      return e.code();
    }
    return std::nullopt;
  };
  CHECK(code(ConstantKind::B, 2, 0.5, 32) == Errc::usage);
  CHECK(code(ConstantKind::D, 3, 0.5, 32) == Errc::usage);
  CHECK(code(ConstantKind::A, 3, 1.0, 32) == Errc::divergence);
  CHECK(code(ConstantKind::A, 3, 0.5, 2) == Errc::usage);
}

TEST_CASE("non-identity is reported with the measurement") {
  try {
    extract_constant(ConstantKind::A, 5, Modulus(0.5), 32, 1e-40);
    FAIL("expected a non-identity error");
  } catch (const NonIdentityError& e) {
    CHECK(e.code() == Errc::non_identity);
    CHECK(e.measured().constancy_dev > 1e-40);
    CHECK(std::fabs(e.measured().value - oracle_a(5, 0.5, 0.7)) < 1e-9);
  }
}

TEST_CASE("constant cache") {
  ConstantCache cache;
  const auto a = cache.get(ConstantKind::E, 3, Modulus(0.3));
  const auto b = cache.get(ConstantKind::E, 3, Modulus(0.3));
  CHECK(a.value == b.value);
  CHECK(cache.size() == 1);
  cache.clear();
  CHECK(cache.size() == 0);
}

TEST_CASE("velocities") {
  CHECK(velocity(WaveFamily::kdv_dn2_sum, 1, Modulus(1.0), 0.0) == doctest::Approx(4.0));
  CHECK(std::fabs(velocity(WaveFamily::kdv_dn2_sum, 4, Modulus(0.0), 0.0) + 16) < 1e-9);
  CHECK(std::fabs(velocity(WaveFamily::kdv_dn2_sum, 4, Modulus(1 - 1e-9), 0.0) - 4) < 1e-3);
  CHECK(velocity(WaveFamily::mkdv1_sn_sum_odd, 1, Modulus(0.3)) == doctest::Approx(-1.3));
  CHECK(std::fabs(velocity(WaveFamily::mkdv1_sn_sum_odd, 3, Modulus(0.0)) + 9) < 1e-9);
  CHECK(std::fabs(velocity(WaveFamily::mkdv1_sn_product_even, 4, Modulus(0.5)) - (-3 - 12 * std::sqrt(0.5))) < 1e-12);
  for (int i = 0; i < 10; ++i) {
    const double m = 0.1 * i;
    for (double beta : {0.0, 1.0, -0.5}) {
      CHECK(std::fabs(velocity(WaveFamily::kdv_dn2_sum, 1, Modulus(m), beta) -
                      velocity(WaveFamily::kdv_dn2_sum, 2, Modulus(m), beta)) < 1e-9);
      CHECK(std::fabs(velocity(WaveFamily::kdv_dn2_sum, 4, Modulus(m), beta) -
                      (8 - 4 * m - 6 * beta - 24 * std::sqrt(1 - m))) < 1e-9);
      if (m > 0) {
        CHECK(std::fabs(velocity(WaveFamily::kdv_dn2_sum, 3, Modulus(m), beta) -
                        (8 - 4 * m - 6 * beta + 24 * (1 - 1 / oracle_q(m)))) < 1e-9);
      }
    }
  }
  CHECK_THROWS_AS(velocity(WaveFamily::mkdv1_sn_product_even, 5, Modulus(0.5)), Error);
  CHECK_THROWS_AS(velocity(WaveFamily::kdv_dn2_sum, 2, Modulus(1.0)), Error);
}

TEST_CASE("build: profiles") {
  const auto kdv = build(WaveFamily::kdv_dn2_sum, 2, 1.0, 0.0, 1, Modulus(0.5));
  CHECK(evaluate(kdv.profile, 0.0, Modulus(0.5)) == doctest::Approx(-3.0).epsilon(1e-14));
  CHECK(kdv.velocity == doctest::Approx(8 - 2.0));

  const auto one = build(WaveFamily::kdv_dn2_sum, 1, 1.0, 0.0, 1, Modulus(1.0));
  const auto tanh = build(WaveFamily::mkdv1_sn_sum_odd, 1, 1.0, 0.0, -1, Modulus(1.0));
  for (double xi = -5; xi <= 5; xi += 0.25) {
    const double sech = 1 / std::cosh(xi);
    CHECK(std::fabs(evaluate(one.profile, xi, Modulus(1.0)) + 2 * sech * sech) < 1e-10);
    CHECK(std::fabs(evaluate(tanh.profile, xi, Modulus(1.0)) + std::tanh(xi)) < 1e-10);
  }

  const double m = 0.64;
  const auto v4 = build(WaveFamily::mkdv1_sn_product_even, 4, 1.5, 0.0, 1, Modulus(m));
  const auto sites = lattice_triples({{4, Spacing::half}, 0.9, Modulus(m)});
  const double expected = 1.5 * m * (1 - std::sqrt(1 - m)) * sites[0].s * sites[1].s * sites[2].s * sites[3].s;
  CHECK(std::fabs(evaluate(v4.profile, 0.9, Modulus(m)) - expected) < 1e-14);

  const auto alt = build(WaveFamily::mkdv2_dn_alternating_even, 4, 2.0, 0.0, -1, Modulus(m));
  CHECK(std::fabs(evaluate(alt.profile, 0.9, Modulus(m)) +
                  2.0 * (sites[0].d - sites[1].d + sites[2].d - sites[3].d)) < 1e-14);

  const auto cn = build(WaveFamily::mkdv2_cn_sum_odd, 3, 0.5, 0.0, 1, Modulus(m));
  const auto full = lattice_triples({{3, Spacing::full}, 0.9, Modulus(m)});
  CHECK(std::fabs(evaluate(cn.profile, 0.9, Modulus(m)) - 0.5 * 0.8 * (full[0].c + full[1].c + full[2].c)) < 1e-14);
}

TEST_CASE("build: legality") {
  CHECK_THROWS_AS(build(WaveFamily::mkdv1_sn_sum_odd, 2, 1, 0, 1, Modulus(0.5)), Error);
  CHECK_THROWS_AS(build(WaveFamily::mkdv2_dn_alternating_even, 3, 1, 0, 1, Modulus(0.5)), Error);
  CHECK_THROWS_AS(build(WaveFamily::mkdv1_sn_product_even, 6, 1, 0, 1, Modulus(0.5)), Error);
  CHECK_THROWS_AS(build(WaveFamily::kdv_dn2_sum, 2, -1, 0, 1, Modulus(0.5)), Error);
  CHECK_THROWS_AS(build(WaveFamily::kdv_dn2_sum, 2, 1, 0, 0, Modulus(0.5)), Error);
  CHECK_THROWS_AS(build(WaveFamily::miura_of_mkdv1, 1, 1, 0, 1, Modulus(0.5)), Error);
  CHECK(family_accepts(WaveFamily::mkdv1_sn_product_even, 4));
  CHECK_FALSE(family_accepts(WaveFamily::mkdv1_sn_product_even, 6));
  CHECK(spacing_of(WaveFamily::mkdv1_sn_sum_odd) == Spacing::full);
  CHECK(spacing_of(WaveFamily::mkdv2_cn_sum_odd) == Spacing::full);
  CHECK(spacing_of(WaveFamily::mkdv2_dn_sum) == Spacing::half);
}

TEST_CASE("Miura of the single sn wave") {
  for (double m : {0.3, 0.8}) {
    for (int sign : {1, -1}) {
      const double alpha = 1.3;
      const auto v = build(WaveFamily::mkdv1_sn_sum_odd, 1, alpha, 0.0, 1, Modulus(m));
      const auto u = miura(v, sign);
      CHECK(u.family == WaveFamily::miura_of_mkdv1);
      CHECK(equation_of(u.family) == Equation::kdv);
      CHECK(u.velocity == doctest::Approx(-(1 + m)));
      for (double xi = -4; xi <= 4; xi += 0.5) {
        const auto t = jacobi(xi, Modulus(m));
        const double expected = alpha * alpha * (m * t.s * t.s + sign * std::sqrt(m) * t.c * t.d);
        CHECK(std::fabs(evaluate(u.profile, xi, Modulus(m)) - expected) < 1e-10);
      }
    }
  }
}

TEST_CASE("Miura of the two-site product reduces to a single cnoidal wave") {
  const double m = 0.55, alpha = 0.7;
  for (int sign : {1, -1}) {
    const auto v = build(WaveFamily::mkdv1_sn_product_even, 2, alpha, 0.0, 1, Modulus(m));
    const auto u = miura(v, sign);
    for (double xi = -3; xi <= 3; xi += 0.3) {
      const auto t = lattice_triples({{2, Spacing::half}, xi, Modulus(m)});
      const double s = sign > 0 ? t[1].s : t[0].s;
      CHECK(std::fabs(evaluate(u.profile, xi, Modulus(m)) - alpha * alpha * (2 * m * s * s - m)) < 1e-10);
    }
  }
  const auto kdv = build(WaveFamily::kdv_dn2_sum, 1, 1, 0, 1, Modulus(0.5));
  CHECK_THROWS_AS(miura(kdv, 1), Error);
  const auto dn = build(WaveFamily::mkdv2_dn_sum, 1, 1, 0, 1, Modulus(0.5));
  CHECK_THROWS_AS(miura(dn, 1), Error);
}

TEST_CASE("evaluation in x and t") {
  const auto w = build(WaveFamily::kdv_dn2_sum, 1, 1.0, 0.0, 1, Modulus(0.5));
  CHECK(eval_solution(w, 0.0, 0.0) == doctest::Approx(-2.0));
  const auto v = build(WaveFamily::mkdv2_dn_sum, 3, 1.7, 0.0, -1, Modulus(0.4));
  CHECK(travelling_coordinate(v, 0.8, 0.0) == doctest::Approx(1.7 * 0.8));
  CHECK(eval_solution(v, 0.8, 0.0) == doctest::Approx(evaluate(v.profile, 1.7 * 0.8, Modulus(0.4))));
  for (double delta : {0.1, -0.37, 2.0}) {
    const double x = 0.45, t = 0.2;
    const double shifted = x + v.velocity * v.alpha * v.alpha * delta;
    CHECK(std::fabs(eval_solution(v, x, t) - eval_solution(v, shifted, t + delta)) < 1e-10);
  }
}

TEST_CASE("p-site KdV wave has period 2K/(p alpha)") {
  const double m = 0.7, alpha = 1.4;
  const double k = complete_k(Modulus(m));
  for (int p : {2, 3, 5}) {
    const auto w = build(WaveFamily::kdv_dn2_sum, p, alpha, 0.3, 1, Modulus(m));
    const double period = 2 * k / (p * alpha);
    for (double x = -1; x <= 1; x += 0.25) {
      CHECK(std::fabs(eval_solution(w, x, 0) - eval_solution(w, x + period, 0)) < 1e-10);
    }
  }
}

TEST_CASE("names round trip") {
  for (auto f : {WaveFamily::kdv_dn2_sum, WaveFamily::mkdv1_sn_sum_odd, WaveFamily::mkdv1_sn_product_even,
                 WaveFamily::mkdv2_dn_sum, WaveFamily::mkdv2_cn_sum_odd, WaveFamily::mkdv2_dn_alternating_even,
                 WaveFamily::miura_of_mkdv1}) {
    CHECK(family_from_name(family_name(f)) == f);
  }
  CHECK_FALSE(family_from_name("nope").has_value());
  CHECK(constant_from_name("L") == ConstantKind::L);
  CHECK_FALSE(constant_from_name("K").has_value());
}
