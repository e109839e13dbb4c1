#include "ellwave/solutions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "ellwave/error.hpp"

namespace ellwave {

namespace {

constexpr std::array<std::pair<WaveFamily, std::string_view>, 7> kFamilyNames{{
    {WaveFamily::kdv_dn2_sum, "kdv"},
    {WaveFamily::mkdv1_sn_sum_odd, "mkdv1-sum"},
    {WaveFamily::mkdv1_sn_product_even, "mkdv1-product"},
    {WaveFamily::mkdv2_dn_sum, "mkdv2-dn"},
    {WaveFamily::mkdv2_cn_sum_odd, "mkdv2-cn"},
    {WaveFamily::mkdv2_dn_alternating_even, "mkdv2-alt"},
    {WaveFamily::miura_of_mkdv1, "miura"},
}};

constexpr std::array<std::pair<ConstantKind, std::string_view>, 12> kConstantNames{{
    {ConstantKind::A, "A"}, {ConstantKind::B, "B"}, {ConstantKind::C, "C"},
    {ConstantKind::D, "D"}, {ConstantKind::E, "E"}, {ConstantKind::F, "F"},
    {ConstantKind::G, "G"}, {ConstantKind::H, "H"}, {ConstantKind::I, "I"},
    {ConstantKind::J, "J"}, {ConstantKind::L, "L"}, {ConstantKind::Q, "Q"},
}};

bool is_odd(int p) { return p % 2 != 0; }

std::string describe(ConstantKind kind, int p, double m) {
  return std::string(constant_name(kind)) + "(p=" + std::to_string(p) + ", m=" +
         std::to_string(m) + ")";
}

}  // namespace

std::string_view family_name(WaveFamily family) noexcept {
  for (const auto& [f, name] : kFamilyNames)
    if (f == family) return name;
  return "?";
}

std::optional<WaveFamily> family_from_name(std::string_view name) noexcept {
  for (const auto& [f, n] : kFamilyNames)
    if (n == name) return f;
  return std::nullopt;
}

std::string_view constant_name(ConstantKind kind) noexcept {
  for (const auto& [k, name] : kConstantNames)
    if (k == kind) return name;
  return "?";
}

std::optional<ConstantKind> constant_from_name(std::string_view name) noexcept {
  for (const auto& [k, n] : kConstantNames)
    if (n == name) return k;
  return std::nullopt;
}

Equation equation_of(WaveFamily family) noexcept {
  switch (family) {
    case WaveFamily::kdv_dn2_sum:
    case WaveFamily::miura_of_mkdv1:
      return Equation::kdv;
    case WaveFamily::mkdv1_sn_sum_odd:
    case WaveFamily::mkdv1_sn_product_even:
      return Equation::mkdv1;
    default:
      return Equation::mkdv2;
  }
}

Spacing spacing_of(WaveFamily family) noexcept {
  switch (family) {
    case WaveFamily::mkdv1_sn_sum_odd:
    case WaveFamily::mkdv2_cn_sum_odd:
      return Spacing::full;
    default:
      return Spacing::half;
  }
}

bool family_accepts(WaveFamily family, int p) noexcept {
  if (p < 1) return false;
  switch (family) {
    case WaveFamily::mkdv1_sn_sum_odd:
    case WaveFamily::mkdv2_cn_sum_odd:
      return is_odd(p);
    case WaveFamily::mkdv1_sn_product_even:
      return p == 2 || p == 4;
    case WaveFamily::mkdv2_dn_alternating_even:
      return !is_odd(p);
    default:
      return true;
  }
}

bool constant_accepts(ConstantKind kind, int p) noexcept {
  if (p < 1) return false;
  switch (kind) {
    case ConstantKind::B:
    case ConstantKind::C:
    case ConstantKind::G:
    case ConstantKind::H:
      return is_odd(p);
    case ConstantKind::D:
    case ConstantKind::I:
    case ConstantKind::J:
    case ConstantKind::L:
      return !is_odd(p);
    default:
      return true;
  }
}

// ---------------------------------------------------------------------------
// Identity constants

namespace {

Spacing spacing_of(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::B:
    case ConstantKind::C:
    case ConstantKind::G:
    case ConstantKind::H:
      return Spacing::full;
    default:
      return Spacing::half;
  }
}

// One evaluation of a defining identity: value = num / den, or num alone for
// the kinds defined as plain sums.
struct IdentitySample {
  Quad num = 0;
  Quad den = 1;
  Quad den_scale = 1;  // sum of |terms| in den
  bool ratio = false;
};

template <class F>
Quad sum_pairs(int p, F&& f) {
  Quad out = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) out += f(i, j);
  return out;
}

template <class F>
Quad sum_triples(int p, F&& f) {
  Quad out = 0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      for (int k = j + 1; k < p; ++k) out += f(i, j, k);
  return out;
}

IdentitySample sample_identity(ConstantKind kind, const std::vector<BasicTriple<Quad>>& t,
                               const Quad& m) {
  using boost::multiprecision::abs;
  const int p = static_cast<int>(t.size());
  IdentitySample out;
  auto set_den = [&](auto&& term) {
    out.ratio = true;
    out.den = 0;
    out.den_scale = 0;
    for (int i = 0; i < p; ++i) {
      const Quad v = term(i);
      out.den += v;
      out.den_scale += abs(v);
    }
  };
  switch (kind) {
    case ConstantKind::A: {
      // sum_i d_i^2 sum_{j != i} s_j c_j d_j = A sum_i s_i c_i d_i
      auto x = [&](int i) { return t[i].s * t[i].c * t[i].d; };
      for (int i = 0; i < p; ++i) {
        Quad others = 0;
        for (int j = 0; j < p; ++j)
          if (j != i) others += x(j);
        out.num += t[i].d * t[i].d * others;
      }
      set_den(x);
      break;
    }
    case ConstantKind::B:
      out.num = m * sum_pairs(p, [&](int i, int j) { return t[i].s * t[j].s; });
      break;
    case ConstantKind::C:
      out.num = m * sum_triples(p, [&](int i, int j, int k) { return t[i].s * t[j].s * t[k].s; });
      set_den([&](int i) { return t[i].s; });
      break;
    case ConstantKind::D: {
      std::vector<Quad> y(static_cast<std::size_t>(p));
      for (int i = 0; i < p; ++i) y[i] = t[i].c * t[i].d / t[i].s;
      out.num = sum_triples(p, [&](int i, int j, int k) { return y[i] * y[j] * y[k]; });
      set_den([&](int i) { return y[i]; });
      break;
    }
    case ConstantKind::E:
      out.num = sum_pairs(p, [&](int i, int j) { return t[i].d * t[j].d; });
      break;
    case ConstantKind::F:
      out.num = sum_triples(p, [&](int i, int j, int k) { return t[i].d * t[j].d * t[k].d; });
      set_den([&](int i) { return t[i].d; });
      break;
    case ConstantKind::G:
      out.num = m * sum_pairs(p, [&](int i, int j) { return t[i].c * t[j].c; });
      break;
    case ConstantKind::H:
      out.num = m * sum_triples(p, [&](int i, int j, int k) { return t[i].c * t[j].c * t[k].c; });
      set_den([&](int i) { return t[i].c; });
      break;
    // Site indices below are 0-based; the parity of i + j (+ k) over 1-based
    // indices differs from the 0-based one by p-independent constants 2 and 3.
    case ConstantKind::I:
      out.num = sum_pairs(p, [&](int i, int j) {
        return (i + j) % 2 == 1 ? Quad(t[i].d * t[j].d) : Quad(0);
      });
      break;
    case ConstantKind::J:
      out.num = sum_pairs(p, [&](int i, int j) {
        return (i + j) % 2 == 0 ? Quad(t[i].d * t[j].d) : Quad(0);
      });
      break;
    case ConstantKind::L:
      out.num = sum_triples(p, [&](int i, int j, int k) {
        const Quad v = t[i].d * t[j].d * t[k].d;
        return (i + j + k + 3) % 2 == 1 ? v : Quad(-v);
      });
      set_den([&](int i) { return i % 2 == 0 ? t[i].d : Quad(-t[i].d); });
      break;
    case ConstantKind::Q:
      break;
  }
  return out;
}

struct Extraction {
  Quad value = 0;
  Quad dev = 0;
  int used = 0;
};

// nullopt when fewer than three samples survive the denominator filter.
std::optional<Extraction> extract_at(ConstantKind kind, int p, const Quad& m, int samples) {
  using boost::multiprecision::abs;
  const LatticeShape shape{p, spacing_of(kind)};
  const Quad k = complete_k_as(m);
  std::vector<IdentitySample> raw;
  raw.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const Quad base = (Quad(0.137) + Quad(0.61803) * i) * k;
    raw.push_back(sample_identity(kind, lattice_triples_as(shape, base, m), m));
  }
  Quad den_max = 0;
  for (const auto& s : raw)
    if (s.ratio) den_max = std::max(den_max, Quad(abs(s.den)));

  std::vector<Quad> values;
  for (const auto& s : raw) {
    if (s.ratio) {
      const Quad mag = abs(s.den);
      if (mag < Quad(1e-6) * den_max || mag < Quad(1e-22) * s.den_scale || mag == 0) continue;
      values.push_back(s.num / s.den);
    } else {
      values.push_back(s.num);
    }
  }
  if (values.size() < 3) return std::nullopt;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  Extraction out;
  out.value = n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
  for (const auto& v : values) out.dev = std::max(out.dev, Quad(abs(v - out.value)));
  out.used = static_cast<int>(n);
  return out;
}

constexpr double kContinuationLow = 0.05;
constexpr double kContinuationHigh = 0.5;

// Barycentric Chebyshev (first kind) interpolant through `nodes` samples on
// [kContinuationLow, kContinuationHigh], evaluated at m.
std::optional<Extraction> continue_from_nodes(ConstantKind kind, int p, const Quad& m, int samples,
                                              int nodes) {
  const Quad pi = boost::math::constants::pi<Quad>();
  const Quad mid = Quad(kContinuationLow + kContinuationHigh) / 2;
  const Quad half = Quad(kContinuationHigh - kContinuationLow) / 2;
  Quad num = 0;
  Quad den = 0;
  Quad dev = 0;
  int used = 0;
  for (int j = 0; j < nodes; ++j) {
    const Quad theta = Quad(2 * j + 1) * pi / Quad(2 * nodes);
    const Quad node = mid + half * cos(theta);
    const auto e = extract_at(kind, p, node, samples);
    if (!e) return std::nullopt;
    const Quad w = (j % 2 ? Quad(-1) : Quad(1)) * sin(theta) / (m - node);
    num += w * e->value;
    den += w;
    dev = std::max(dev, e->dev);
    used += e->used;
  }
  return Extraction{num / den, dev, used};
}

}  // namespace

double constant_q(Modulus m) {
  if (m.value() == 1.0) throw Error(Errc::divergence, "Q(m) needs K(m); m = 1 diverges");
  const Quad mq = m.value();
  const Quad s = jacobi_as(Quad(2) * complete_k_as(mq) / 3, mq).s;
  return to_double(s * s);
}

IdentityConstant extract_constant(ConstantKind kind, int p, Modulus m, int samples, double tol) {
  if (!constant_accepts(kind, p)) {
    throw Error(Errc::usage, "constant " + describe(kind, p, m.value()) +
                                 " is not defined for this parity of p");
  }
  if (samples < 3) throw Error(Errc::usage, "need at least 3 samples");
  IdentityConstant out;
  out.kind = kind;
  out.p = p;
  out.m = m;
  if (kind == ConstantKind::Q) {
    out.value = constant_q(m);
    out.samples_used = 1;
    return out;
  }
  // Every defining sum is empty at p = 1.
  if (p == 1) {
    out.samples_used = samples;
    return out;
  }
  if (m.value() > 1.0 - kLatticeEpsilon) {
    throw Error(Errc::divergence, describe(kind, p, m.value()) + " needs m <= 1 - 1e-9");
  }
  const Quad mq = m.value();
  std::optional<Extraction> e = extract_at(kind, p, mq, samples);
  if (m.value() < kContinuationLow && (!e || e->dev > Quad(tol))) {
    auto fine = continue_from_nodes(kind, p, mq, samples, 20);
    auto coarse = continue_from_nodes(kind, p, mq, samples, 16);
    if (fine && coarse) {
      using boost::multiprecision::abs;
      e = Extraction{fine->value, std::max(fine->dev, Quad(abs(fine->value - coarse->value))),
                     fine->used};
      out.continued = true;
    }
  }
  if (!e) {
    throw Error(Errc::degenerate_sampling,
                describe(kind, p, m.value()) + ": fewer than 3 usable sample arguments");
  }
  out.value = to_double(e->value);
  out.constancy_dev = to_double(e->dev);
  out.samples_used = e->used;
  if (!(out.constancy_dev <= tol)) {
    throw NonIdentityError(describe(kind, p, m.value()) + " varies by " +
                               std::to_string(out.constancy_dev) + " across samples",
                           out);
  }
  return out;
}

IdentityConstant ConstantCache::get(ConstantKind kind, int p, Modulus m, int samples) {
  const Key key{kind, p, m.value(), samples};
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  IdentityConstant c = extract_constant(kind, p, m, samples);
  std::unique_lock lock(mutex_);
  entries_.emplace(key, c);
  return c;
}

std::size_t ConstantCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void ConstantCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

ConstantCache& shared_constant_cache() {
  static ConstantCache cache;
  return cache;
}

std::optional<double> closed_form(ConstantKind kind, int p, Modulus modulus) {
  if (!constant_accepts(kind, p)) return std::nullopt;
  const double m = modulus.value();
  const double pd = p;
  if (kind == ConstantKind::Q) {
    if (m == 0.0) return 0.75;
    return std::nullopt;
  }
  if (p == 1 && kind != ConstantKind::D) return 0.0;
  if (m == 0.0) {
    switch (kind) {
      case ConstantKind::A: return -(pd - 1) * (pd - 2) / 3;
      case ConstantKind::E: return pd * (pd - 1) / 2;
      case ConstantKind::F: return (pd - 1) * (pd - 2) / 6;
      case ConstantKind::G: return 0.0;
      case ConstantKind::H: return (pd * pd - 1) / 6;
      case ConstantKind::I: return pd * pd / 4;
      case ConstantKind::J: return pd * (pd - 2) / 4;
      case ConstantKind::L: return (pd - 1) * (pd - 2) / 6;
      default: break;
    }
  }
  if (m == 1.0) {
    switch (kind) {
      case ConstantKind::A:
      case ConstantKind::E:
      case ConstantKind::F:
      case ConstantKind::G:
      case ConstantKind::H:
      case ConstantKind::I:
      case ConstantKind::J:
      case ConstantKind::L:
        return 0.0;
      default:
        return std::nullopt;
    }
  }
  const double root = std::sqrt(1 - m);
  const double r = std::sqrt(root);
  auto q = [&] { return constant_q(modulus); };
  switch (p) {
    case 2:
      switch (kind) {
        case ConstantKind::A: return 0.0;
        case ConstantKind::E:
        case ConstantKind::I: return root;
        case ConstantKind::F:
        case ConstantKind::J:
        case ConstantKind::L: return 0.0;
        default: return std::nullopt;
      }
    case 3: {
      const double Q = q();
      switch (kind) {
        case ConstantKind::A: return 2 - 2 / Q;
        case ConstantKind::B: return -m * Q;
        case ConstantKind::C: return -1 / Q;
        case ConstantKind::E: return 1 - m * Q + 2 * std::sqrt(1 - m * Q);
        case ConstantKind::F: return (1 - Q) / Q;
        case ConstantKind::G: return -m * (1 - m) * Q / (1 - m * Q);
        case ConstantKind::H: return (1 - m * Q) / Q;
        default: return std::nullopt;
      }
    }
    case 4:
      switch (kind) {
        case ConstantKind::A: return -2 * root;
        case ConstantKind::E: return 2 * r * (1 + r + r * r);
        case ConstantKind::F:
        case ConstantKind::L: return r * r;
        case ConstantKind::I: return 2 * r * (1 + r * r);
        case ConstantKind::J: return 2 * r * r;
        default: return std::nullopt;
      }
    default:
      return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Families

namespace {

void check_family(WaveFamily family, int p) {
  if (family == WaveFamily::miura_of_mkdv1) {
    throw Error(Errc::usage, "Miura solutions are produced by miura() from a type-1 mKdV wave");
  }
  if (!family_accepts(family, p)) {
    std::string rule = family == WaveFamily::mkdv1_sn_product_even ? "p in {2, 4}"
                       : spacing_of(family) == Spacing::full      ? "odd p"
                                                                  : "even p";
    throw Error(Errc::usage, std::string(family_name(family)) + " requires " + rule + ", got p=" +
                                 std::to_string(p));
  }
}

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw Error(Errc::usage, "sign must be +1 or -1");
}

}  // namespace

double velocity(WaveFamily family, int p, Modulus modulus, double beta) {
  check_family(family, p);
  const double m = modulus.value();
  if (p > 1 && m > 1.0 - kLatticeEpsilon) {
    throw Error(Errc::divergence, "velocity for p=" + std::to_string(p) + " needs m <= 1 - 1e-9");
  }
  auto constant = [&](ConstantKind kind) {
    return p == 1 ? 0.0 : shared_constant_cache().get(kind, p, modulus).value;
  };
  switch (family) {
    case WaveFamily::kdv_dn2_sum:
      return 8 - 4 * m - 6 * beta + 12 * constant(ConstantKind::A);
    case WaveFamily::mkdv1_sn_sum_odd:
      return -(1 + m) - 6 * (constant(ConstantKind::B) - constant(ConstantKind::C));
    case WaveFamily::mkdv1_sn_product_even:
      return p == 2 ? -2 * (2 - m) : -2 * (2 - m) - 12 * std::sqrt(1 - m);
    case WaveFamily::mkdv2_dn_sum:
      return 2 - m + 6 * (constant(ConstantKind::E) - constant(ConstantKind::F));
    case WaveFamily::mkdv2_cn_sum_odd:
      return 2 * m - 1 + 6 * (constant(ConstantKind::G) - constant(ConstantKind::H));
    case WaveFamily::mkdv2_dn_alternating_even:
      return 2 - m -
             6 * (constant(ConstantKind::I) - constant(ConstantKind::J) +
                  constant(ConstantKind::L));
    case WaveFamily::miura_of_mkdv1:
      break;
  }
  throw Error(Errc::usage, "no velocity formula for this family");
}

WaveSolution build(WaveFamily family, int p, double alpha, double beta, int sign, Modulus modulus) {
  check_family(family, p);
  check_sign(sign);
  if (!(alpha > 0.0 && std::isfinite(alpha))) throw Error(Errc::usage, "alpha must be positive");
  if (!std::isfinite(beta)) throw Error(Errc::usage, "beta must be finite");

  WaveSolution w;
  w.family = family;
  w.p = p;
  w.alpha = alpha;
  w.sign = sign;
  w.m = modulus;
  w.beta = family == WaveFamily::kdv_dn2_sum ? beta : 0.0;
  w.source_family = family;
  w.source_sign = sign;
  w.velocity = velocity(family, p, modulus, w.beta);

  const double m = modulus.value();
  const LatticeShape shape{p, spacing_of(family)};
  const double a = alpha;
  const double s = sign;
  EllipticPoly profile(shape);
  switch (family) {
    case WaveFamily::kdv_dn2_sum:
      for (int i = 1; i <= p; ++i) profile += EllipticPoly::variable(shape, Var::d, i, 2, -2 * a * a);
      profile += EllipticPoly::constant(shape, w.beta * a * a);
      break;
    case WaveFamily::mkdv1_sn_sum_odd:
      for (int i = 1; i <= p; ++i)
        profile += EllipticPoly::variable(shape, Var::s, i, 1, s * std::sqrt(m) * a);
      break;
    case WaveFamily::mkdv1_sn_product_even: {
      // v2 = +-a m s1 s2,  v4 = +-a m (1 - sqrt(1-m)) s1 s2 s3 s4
      const double lead = p == 2 ? 1.0 : 1.0 - std::sqrt(1.0 - m);
      profile = EllipticPoly::constant(shape, s * a * lead);
      profile *= EllipticPoly::from_terms(shape, {Monomial{1.0, 1, {}}});
      for (int i = 1; i <= p; ++i) profile *= EllipticPoly::variable(shape, Var::s, i);
      break;
    }
    case WaveFamily::mkdv2_dn_sum:
      for (int i = 1; i <= p; ++i) profile += EllipticPoly::variable(shape, Var::d, i, 1, s * a);
      break;
    case WaveFamily::mkdv2_cn_sum_odd:
      for (int i = 1; i <= p; ++i)
        profile += EllipticPoly::variable(shape, Var::c, i, 1, s * std::sqrt(m) * a);
      break;
    case WaveFamily::mkdv2_dn_alternating_even:
      for (int i = 1; i < p; i += 2) {
        profile += EllipticPoly::variable(shape, Var::d, i, 1, s * a);
        profile += EllipticPoly::variable(shape, Var::d, i + 1, 1, -s * a);
      }
      break;
    case WaveFamily::miura_of_mkdv1:
      break;
  }
  w.profile = std::move(profile);
  return w;
}

WaveSolution miura(const WaveSolution& v, int sign) {
  check_sign(sign);
  if (equation_of(v.family) != Equation::mkdv1 || v.family == WaveFamily::miura_of_mkdv1) {
    throw Error(Errc::usage, std::string("Miura transform needs a type-1 mKdV wave, got ") +
                                 std::string(family_name(v.family)));
  }
  WaveSolution u = v;
  u.family = WaveFamily::miura_of_mkdv1;
  u.sign = sign;
  u.beta = 0.0;
  u.source_family = v.family;
  u.source_sign = v.sign;
  u.profile = poly_mul(v.profile, v.profile) + differentiate(v.profile) * (sign * v.alpha);
  return u;
}

double travelling_coordinate(const WaveSolution& w, double x, double t) {
  return w.alpha * (x - w.velocity * w.alpha * w.alpha * t);
}

double eval_solution(const WaveSolution& w, double x, double t) {
  return evaluate(w.profile, travelling_coordinate(w, x, t), w.m);
}

}  // namespace ellwave
