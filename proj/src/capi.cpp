#include "ellwave/ellwave.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "ellwave/error.hpp"
#include "ellwave/verify.hpp"

struct ew_solution {
  ellwave::WaveSolution wave;
};

namespace {

thread_local std::string g_last_error;

ew_status to_status(ellwave::Errc code) {
  switch (code) {
    case ellwave::Errc::domain: return EW_ERR_DOMAIN;
    case ellwave::Errc::divergence: return EW_ERR_DIVERGENCE;
    case ellwave::Errc::usage: return EW_ERR_USAGE;
    case ellwave::Errc::degenerate_sampling: return EW_ERR_DEGENERATE_SAMPLING;
    case ellwave::Errc::non_identity: return EW_ERR_NON_IDENTITY;
    case ellwave::Errc::parse: return EW_ERR_PARSE;
  }
  return EW_ERR_INTERNAL;
}

ew_status fail(ew_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
ew_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return EW_OK;
  } catch (const ellwave::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EW_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(EW_ERR_INTERNAL, "unknown exception");
  }
}

#define EW_REQUIRE(ptr)                                                 \
  do {                                                                  \
    if ((ptr) == nullptr) return fail(EW_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

ellwave::WaveFamily to_family(ew_family f) { return static_cast<ellwave::WaveFamily>(f); }
ew_family from_family(ellwave::WaveFamily f) { return static_cast<ew_family>(f); }
ellwave::ConstantKind to_kind(ew_constant_kind k) { return static_cast<ellwave::ConstantKind>(k); }

bool valid_family(ew_family f) { return f >= EW_KDV_DN2_SUM && f <= EW_MIURA_OF_MKDV1; }
bool valid_kind(ew_constant_kind k) { return k >= EW_CONST_A && k <= EW_CONST_Q; }

ew_triple to_c(const ellwave::EllipticTriple& t) { return {t.s, t.c, t.d}; }

ew_constant to_c(const ellwave::IdentityConstant& c) {
  return {static_cast<ew_constant_kind>(c.kind), c.p, c.m.value(), c.value, c.constancy_dev,
          c.samples_used, c.continued ? 1 : 0};
}

}  // namespace

extern "C" {

const char* ew_last_error(void) { return g_last_error.c_str(); }

const char* ew_status_string(ew_status status) {
  switch (status) {
    case EW_OK: return "ok";
    case EW_ERR_DOMAIN: return "domain error";
    case EW_ERR_DIVERGENCE: return "divergence";
    case EW_ERR_USAGE: return "usage error";
    case EW_ERR_DEGENERATE_SAMPLING: return "degenerate sampling";
    case EW_ERR_NON_IDENTITY: return "non-identity";
    case EW_ERR_PARSE: return "parse error";
    case EW_ERR_NULL_ARGUMENT: return "null argument";
    case EW_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case EW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* ew_version(void) { return "0.1.0"; }

const char* ew_family_name(ew_family family) {
  if (!valid_family(family)) return "?";
  return ellwave::family_name(to_family(family)).data();
}

ew_status ew_family_from_name(const char* name, ew_family* out) {
  EW_REQUIRE(name);
  EW_REQUIRE(out);
  const auto f = ellwave::family_from_name(name);
  if (!f) return fail(EW_ERR_USAGE, std::string("unknown family '") + name + "'");
  *out = from_family(*f);
  return EW_OK;
}

int ew_family_accepts(ew_family family, int p) {
  return valid_family(family) && ellwave::family_accepts(to_family(family), p) ? 1 : 0;
}

const char* ew_constant_name(ew_constant_kind kind) {
  if (!valid_kind(kind)) return "?";
  return ellwave::constant_name(to_kind(kind)).data();
}

ew_status ew_constant_from_name(const char* name, ew_constant_kind* out) {
  EW_REQUIRE(name);
  EW_REQUIRE(out);
  const auto k = ellwave::constant_from_name(name);
  if (!k) return fail(EW_ERR_USAGE, std::string("unknown constant '") + name + "'");
  *out = static_cast<ew_constant_kind>(*k);
  return EW_OK;
}

int ew_constant_accepts(ew_constant_kind kind, int p) {
  return valid_kind(kind) && ellwave::constant_accepts(to_kind(kind), p) ? 1 : 0;
}

ew_status ew_complete_k(double m, double* out) {
  EW_REQUIRE(out);
  return guarded([&] { *out = ellwave::complete_k(ellwave::Modulus(m)); });
}

ew_status ew_jacobi(double u, double m, ew_triple* out) {
  EW_REQUIRE(out);
  return guarded([&] { *out = to_c(ellwave::jacobi(u, ellwave::Modulus(m))); });
}

ew_status ew_lattice_triples(int p, ew_spacing spacing, double base, double m, ew_triple* out,
                             size_t capacity) {
  EW_REQUIRE(out);
  if (p >= 1 && capacity < static_cast<size_t>(p)) {
    return fail(EW_ERR_BUFFER_TOO_SMALL, "output holds fewer than p triples");
  }
  if (spacing != EW_SPACING_HALF && spacing != EW_SPACING_FULL) {
    return fail(EW_ERR_USAGE, "unknown spacing");
  }
  return guarded([&] {
    const ellwave::Lattice lattice{
        {p, spacing == EW_SPACING_HALF ? ellwave::Spacing::half : ellwave::Spacing::full},
        base,
        ellwave::Modulus(m)};
    const auto triples = ellwave::lattice_triples(lattice);
    for (std::size_t i = 0; i < triples.size(); ++i) out[i] = to_c(triples[i]);
  });
}

ew_status ew_constant_q(double m, double* out) {
  EW_REQUIRE(out);
  return guarded([&] { *out = ellwave::constant_q(ellwave::Modulus(m)); });
}

ew_status ew_extract_constant(ew_constant_kind kind, int p, double m, int samples, double tol,
                              ew_constant* out) {
  EW_REQUIRE(out);
  if (!valid_kind(kind)) return fail(EW_ERR_USAGE, "unknown constant kind");
  if (samples <= 0) samples = ellwave::kDefaultSamples;
  if (!(tol > 0)) tol = ellwave::kDefaultConstancyTol;
  try {
    g_last_error.clear();
    *out = to_c(ellwave::extract_constant(to_kind(kind), p, ellwave::Modulus(m), samples, tol));
    return EW_OK;
  } catch (const ellwave::NonIdentityError& e) {
    *out = to_c(e.measured());
    return fail(EW_ERR_NON_IDENTITY, e.what());
  } catch (...) {
    return guarded([] { throw; });
  }
}

ew_status ew_closed_form(ew_constant_kind kind, int p, double m, int* known, double* out) {
  EW_REQUIRE(known);
  EW_REQUIRE(out);
  if (!valid_kind(kind)) return fail(EW_ERR_USAGE, "unknown constant kind");
  return guarded([&] {
    const auto v = ellwave::closed_form(to_kind(kind), p, ellwave::Modulus(m));
    *known = v ? 1 : 0;
    *out = v.value_or(0.0);
  });
}

ew_status ew_velocity(ew_family family, int p, double m, double beta, double* out) {
  EW_REQUIRE(out);
  if (!valid_family(family)) return fail(EW_ERR_USAGE, "unknown family");
  return guarded([&] { *out = ellwave::velocity(to_family(family), p, ellwave::Modulus(m), beta); });
}

ew_status ew_solution_build(ew_family family, int p, double alpha, double beta, int sign, double m,
                            ew_solution** out) {
  EW_REQUIRE(out);
  if (!valid_family(family)) return fail(EW_ERR_USAGE, "unknown family");
  return guarded([&] {
    *out = new ew_solution{
        ellwave::build(to_family(family), p, alpha, beta, sign, ellwave::Modulus(m))};
  });
}

ew_status ew_solution_miura(const ew_solution* v, int sign, ew_solution** out) {
  EW_REQUIRE(v);
  EW_REQUIRE(out);
  return guarded([&] { *out = new ew_solution{ellwave::miura(v->wave, sign)}; });
}

void ew_solution_free(ew_solution* w) { delete w; }

ew_status ew_solution_info_get(const ew_solution* w, ew_solution_info* out) {
  EW_REQUIRE(w);
  EW_REQUIRE(out);
  const auto& s = w->wave;
  *out = {from_family(s.family), s.p,        s.alpha, s.beta, s.sign, s.m.value(), s.velocity,
          from_family(s.source_family), s.source_sign};
  return EW_OK;
}

ew_status ew_solution_set_velocity(ew_solution* w, double velocity) {
  EW_REQUIRE(w);
  w->wave.velocity = velocity;
  return EW_OK;
}

ew_status ew_solution_eval(const ew_solution* w, double x, double t, double* out) {
  EW_REQUIRE(w);
  EW_REQUIRE(out);
  return guarded([&] { *out = ellwave::eval_solution(w->wave, x, t); });
}

ew_status ew_solution_profile(const ew_solution* w, char* buf, size_t capacity, size_t* required) {
  EW_REQUIRE(w);
  const std::string text = ellwave::to_string(w->wave.profile);
  if (required) *required = text.size() + 1;
  if (capacity == 0) return EW_OK;
  EW_REQUIRE(buf);
  if (capacity < text.size() + 1) return fail(EW_ERR_BUFFER_TOO_SMALL, "profile buffer too small");
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return EW_OK;
}

ew_status ew_residual(const ew_solution* w, double xi, double* out) {
  EW_REQUIRE(w);
  EW_REQUIRE(out);
  return guarded([&] {
    const auto& s = w->wave;
    switch (ellwave::equation_of(s.family)) {
      case ellwave::Equation::kdv: *out = ellwave::kdv_residual(s, xi); break;
      case ellwave::Equation::mkdv1: *out = ellwave::mkdv_residual(s, xi, -1); break;
      case ellwave::Equation::mkdv2: *out = ellwave::mkdv_residual(s, xi, 1); break;
    }
  });
}

ew_status ew_scan_interval(const ew_solution* w, double* xi_min, double* xi_max) {
  EW_REQUIRE(w);
  EW_REQUIRE(xi_min);
  EW_REQUIRE(xi_max);
  return guarded([&] {
    const auto [lo, hi] = ellwave::scan_interval(w->wave);
    *xi_min = lo;
    *xi_max = hi;
  });
}

ew_status ew_residual_scan(const ew_solution* w, double xi_min, double xi_max, int n,
                           ew_residual_report* out) {
  EW_REQUIRE(w);
  EW_REQUIRE(out);
  return guarded([&] {
    const auto r = ellwave::residual_scan(w->wave, xi_min, xi_max, n);
    *out = {from_family(r.family), r.p,       r.m,         r.alpha,      r.beta,
            r.sign,                r.max_abs, r.max_rel,   r.argmax_xi,  r.grid_points};
  });
}

ew_status ew_derivative_crosscheck(const ew_solution* w, double xi, double* out) {
  EW_REQUIRE(w);
  EW_REQUIRE(out);
  return guarded([&] { *out = ellwave::derivative_crosscheck(w->wave, xi); });
}

}  // extern "C"
