#include "ellwave/algebra.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

#include "ellwave/error.hpp"

namespace ellwave {

namespace {

bool same_key(const Monomial& a, const Monomial& b) {
  return a.m_power == b.m_power && a.sites == b.sites;
}

bool key_less(const Monomial& a, const Monomial& b) {
  if (a.m_power != b.m_power) return a.m_power < b.m_power;
  return std::lexicographical_compare(a.sites.begin(), a.sites.end(), b.sites.begin(),
                                      b.sites.end());
}

void check_same_shape(const EllipticPoly& a, const EllipticPoly& b) {
  if (a.shape() != b.shape()) {
    throw Error(Errc::usage, "polynomials belong to different lattices");
  }
}

void check_exponent(int e) {
  if (e > kMaxExponent) {
    throw Error(Errc::usage, "exponent " + std::to_string(e) + " exceeds bound " +
                                 std::to_string(kMaxExponent) + " (runaway symbolic growth)");
  }
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.coeff = a.coeff * b.coeff;
  out.m_power = a.m_power + b.m_power;
  out.sites.reserve(a.sites.size() + b.sites.size());
  auto ia = a.sites.begin();
  auto ib = b.sites.begin();
  while (ia != a.sites.end() || ib != b.sites.end()) {
    if (ib == b.sites.end() || (ia != a.sites.end() && ia->site < ib->site)) {
      out.sites.push_back(*ia++);
    } else if (ia == a.sites.end() || ib->site < ia->site) {
      out.sites.push_back(*ib++);
    } else {
      const int s = ia->s + ib->s;
      const int c = ia->c + ib->c;
      const int d = ia->d + ib->d;
      check_exponent(std::max({s, c, d}));
      out.sites.push_back({ia->site, static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(c),
                           static_cast<std::uint8_t>(d)});
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace

void EllipticPoly::canonicalize() {
  for (auto& t : terms_) {
    std::erase_if(t.sites, [](const SitePowers& f) { return f.s == 0 && f.c == 0 && f.d == 0; });
    std::sort(t.sites.begin(), t.sites.end());
    for (std::size_t i = 1; i < t.sites.size(); ++i) {
      if (t.sites[i].site == t.sites[i - 1].site) {
        throw Error(Errc::usage, "monomial lists site " + std::to_string(t.sites[i].site) + " twice");
      }
    }
    for (const auto& f : t.sites) {
      if (f.site < 1 || f.site > shape_.p) {
        throw Error(Errc::usage, "site index " + std::to_string(f.site) + " outside lattice of p=" +
                                     std::to_string(shape_.p));
      }
    }
  }
  std::stable_sort(terms_.begin(), terms_.end(), key_less);
  std::vector<Monomial> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && same_key(merged.back(), t)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [](const Monomial& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

EllipticPoly EllipticPoly::constant(LatticeShape shape, double value) {
  return from_terms(shape, {Monomial{value, 0, {}}});
}

EllipticPoly EllipticPoly::variable(LatticeShape shape, Var var, int site, int power, double coeff,
                                    int m_power) {
  if (power < 0) throw Error(Errc::usage, "negative exponent");
  check_exponent(power);
  SitePowers f{site, 0, 0, 0};
  const auto e = static_cast<std::uint8_t>(power);
  switch (var) {
    case Var::s: f.s = e; break;
    case Var::c: f.c = e; break;
    case Var::d: f.d = e; break;
  }
  return from_terms(shape, {Monomial{coeff, m_power, {f}}});
}

EllipticPoly EllipticPoly::from_terms(LatticeShape shape, std::vector<Monomial> terms) {
  EllipticPoly out(shape);
  for (const auto& t : terms) {
    if (t.m_power < 0) throw Error(Errc::usage, "negative power of m");
    for (const auto& f : t.sites) check_exponent(std::max({f.s, f.c, f.d}));
  }
  out.terms_ = std::move(terms);
  out.canonicalize();
  return out;
}

int EllipticPoly::max_exponent() const noexcept {
  int e = 0;
  for (const auto& t : terms_)
    for (const auto& f : t.sites) e = std::max({e, int(f.s), int(f.c), int(f.d)});
  return e;
}

int EllipticPoly::max_m_power() const noexcept {
  int e = 0;
  for (const auto& t : terms_) e = std::max(e, t.m_power);
  return e;
}

EllipticPoly& EllipticPoly::operator+=(const EllipticPoly& other) {
  check_same_shape(*this, other);
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  canonicalize();
  return *this;
}

EllipticPoly& EllipticPoly::operator-=(const EllipticPoly& other) {
  return *this += other * -1.0;
}

EllipticPoly& EllipticPoly::operator*=(const EllipticPoly& other) {
  check_same_shape(*this, other);
  std::vector<Monomial> product;
  product.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_)
    for (const auto& b : other.terms_) product.push_back(multiply(a, b));
  terms_ = std::move(product);
  canonicalize();
  return *this;
}

EllipticPoly& EllipticPoly::operator*=(double factor) {
  for (auto& t : terms_) t.coeff *= factor;
  canonicalize();
  return *this;
}

EllipticPoly poly_add(const EllipticPoly& a, const EllipticPoly& b) { return a + b; }

EllipticPoly poly_mul(const EllipticPoly& a, const EllipticPoly& b) { return a * b; }

EllipticPoly differentiate(const EllipticPoly& a) {
  std::vector<Monomial> out;
  for (const auto& t : a.terms()) {
    for (std::size_t k = 0; k < t.sites.size(); ++k) {
      const SitePowers f = t.sites[k];
      // Each branch rewrites factor k and leaves the rest of the monomial alone.
      auto emit = [&](double factor, int ds, int dc, int dd, int dm) {
        Monomial m = t;
        m.coeff *= factor;
        m.m_power += dm;
        SitePowers& g = m.sites[k];
        check_exponent(std::max({g.s + ds, g.c + dc, g.d + dd}));
        g.s = static_cast<std::uint8_t>(g.s + ds);
        g.c = static_cast<std::uint8_t>(g.c + dc);
        g.d = static_cast<std::uint8_t>(g.d + dd);
        out.push_back(std::move(m));
      };
      if (f.s > 0) emit(f.s, -1, +1, +1, 0);    // s' = c d
      if (f.c > 0) emit(-f.c, +1, -1, +1, 0);   // c' = -s d
      if (f.d > 0) emit(-f.d, +1, +1, -1, 1);   // d' = -m s c
    }
  }
  return EllipticPoly::from_terms(a.shape(), std::move(out));
}

EllipticPoly differentiate(const EllipticPoly& a, int order) {
  EllipticPoly out = a;
  for (int i = 0; i < order; ++i) out = differentiate(out);
  return out;
}

template <class T>
T evaluate_on(const EllipticPoly& a, std::span<const BasicTriple<T>> sites, const T& m,
              T* magnitude) {
  using std::abs;
  if (static_cast<int>(sites.size()) != a.shape().p) {
    throw Error(Errc::usage, "site values do not match the lattice size");
  }
  const int max_e = a.max_exponent();
  const int stride = max_e + 1;
  // powers[(site * 3 + var) * stride + e]
  std::vector<T> powers(sites.size() * 3 * static_cast<std::size_t>(stride));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::array<T, 3> base{sites[i].s, sites[i].c, sites[i].d};
    for (int v = 0; v < 3; ++v) {
      T* row = &powers[(i * 3 + v) * stride];
      row[0] = 1;
      for (int e = 1; e <= max_e; ++e) row[e] = row[e - 1] * base[v];
    }
  }
  std::vector<T> m_powers(static_cast<std::size_t>(a.max_m_power()) + 1);
  m_powers[0] = 1;
  for (std::size_t k = 1; k < m_powers.size(); ++k) m_powers[k] = m_powers[k - 1] * m;

  T sum = 0;
  T scale = 0;
  for (const auto& t : a.terms()) {
    T term = T(t.coeff) * m_powers[t.m_power];
    for (const auto& f : t.sites) {
      const std::size_t i = static_cast<std::size_t>(f.site - 1);
      if (f.s) term *= powers[(i * 3 + 0) * stride + f.s];
      if (f.c) term *= powers[(i * 3 + 1) * stride + f.c];
      if (f.d) term *= powers[(i * 3 + 2) * stride + f.d];
    }
    sum += term;
    if (magnitude) scale += abs(term);
  }
  if (magnitude) *magnitude = scale;
  return sum;
}

template double evaluate_on<double>(const EllipticPoly&, std::span<const BasicTriple<double>>,
                                    const double&, double*);
template Quad evaluate_on<Quad>(const EllipticPoly&, std::span<const BasicTriple<Quad>>,
                                const Quad&, Quad*);

double evaluate(const EllipticPoly& a, double base, Modulus m) {
  if (a.empty()) return 0.0;
  const auto sites = lattice_triples(Lattice{a.shape(), base, m});
  return evaluate_on<double>(a, sites, m.value());
}

// ---------------------------------------------------------------------------
// Text form

namespace {

void append_power(std::string& out, const char* name, int site, int power) {
  if (power == 0) return;
  if (!out.empty() && out.back() != ' ') out += '*';
  out += name;
  if (site > 0) out += std::to_string(site);
  if (power > 1) {
    out += '^';
    out += std::to_string(power);
  }
}

std::string format_coeff(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class PolyParser {
 public:
  PolyParser(std::string_view text, LatticeShape shape) : text_(text), shape_(shape) {}

  EllipticPoly parse() {
    std::vector<Monomial> terms;
    skip_ws();
    if (text_.substr(pos_) == "0") return EllipticPoly(shape_);
    double sign = 1.0;
    if (peek() == '-') {
      sign = -1.0;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    while (true) {
      Monomial t = term();
      t.coeff *= sign;
      terms.push_back(std::move(t));
      skip_ws();
      if (pos_ == text_.size()) break;
      const char op = text_[pos_++];
      if (op == '+') sign = 1.0;
      else if (op == '-') sign = -1.0;
      else fail("expected '+' or '-'");
    }
    return EllipticPoly::from_terms(shape_, std::move(terms));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw Error(Errc::parse, "polynomial text, offset " + std::to_string(pos_) + ": " + why);
  }

  int integer() {
    int v = 0;
    const auto* begin = text_.data() + pos_;
    const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
    if (ec != std::errc{} || end == begin) fail("expected integer");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }

  int optional_power() {
    if (peek() != '^') return 1;
    ++pos_;
    return integer();
  }

  Monomial term() {
    Monomial t{1.0, 0, {}};
    skip_ws();
    do {
      skip_ws();
      factor(t);
      skip_ws();
    } while (peek() == '*' && ++pos_);
    return t;
  }

  void factor(Monomial& t) {
    const char ch = peek();
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
      double v = 0.0;
      const auto* begin = text_.data() + pos_;
      const auto [end, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
      if (ec != std::errc{}) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      t.coeff *= v;
      return;
    }
    if (ch == 'm') {
      ++pos_;
      t.m_power += optional_power();
      return;
    }
    if (ch == 's' || ch == 'c' || ch == 'd') {
      ++pos_;
      const int site = integer();
      const int power = optional_power();
      if (power < 0 || power > kMaxExponent) fail("exponent out of range");
      auto it = std::find_if(t.sites.begin(), t.sites.end(),
                             [&](const SitePowers& f) { return f.site == site; });
      if (it == t.sites.end()) {
        t.sites.push_back({site, 0, 0, 0});
        it = t.sites.end() - 1;
      }
      std::uint8_t& slot = ch == 's' ? it->s : ch == 'c' ? it->c : it->d;
      slot = static_cast<std::uint8_t>(slot + power);
      return;
    }
    fail(std::string("unexpected character '") + ch + "'");
  }

  std::string_view text_;
  LatticeShape shape_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const EllipticPoly& a) {
  if (a.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    const bool negative = std::signbit(t.coeff);
    if (first) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    const double mag = std::fabs(t.coeff);
    const bool bare = t.m_power == 0 && t.sites.empty();
    const std::size_t start = out.size();
    if (mag != 1.0 || bare) out += format_coeff(mag);
    std::string factors;
    append_power(factors, "m", 0, t.m_power);
    for (const auto& f : t.sites) {
      append_power(factors, "s", f.site, f.s);
      append_power(factors, "c", f.site, f.c);
      append_power(factors, "d", f.site, f.d);
    }
    if (!factors.empty() && out.size() > start) out += '*';
    out += factors;
    first = false;
  }
  return out;
}

EllipticPoly parse_poly(std::string_view text, LatticeShape shape) {
  return PolyParser(text, shape).parse();
}

}  // namespace ellwave
