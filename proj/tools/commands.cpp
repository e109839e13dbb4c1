#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <thread>

namespace ellwave::cli {

namespace {

constexpr ew_constant_kind kAllKinds[] = {EW_CONST_A, EW_CONST_B, EW_CONST_C, EW_CONST_D,
                                          EW_CONST_E, EW_CONST_F, EW_CONST_G, EW_CONST_H,
                                          EW_CONST_I, EW_CONST_J, EW_CONST_L, EW_CONST_Q};
constexpr ew_family kAllFamilies[] = {
    EW_KDV_DN2_SUM,   EW_MKDV1_SN_SUM_ODD,          EW_MKDV1_SN_PRODUCT_EVEN, EW_MKDV2_DN_SUM,
    EW_MKDV2_CN_SUM_ODD, EW_MKDV2_DN_ALTERNATING_EVEN, EW_MIURA_OF_MKDV1};

using Handle = std::unique_ptr<ew_solution, decltype(&ew_solution_free)>;

std::string describe(ew_status s) {
  std::string out = ew_status_string(s);
  const std::string detail = ew_last_error();
  if (!detail.empty()) out += ": " + detail;
  return out;
}

int exit_code_for(ew_status s) {
  return s == EW_ERR_USAGE || s == EW_ERR_DOMAIN ? 2 : 1;
}

// Runs body(i) for i in [0, n) on a few threads. Results go to indexed slots,
// so completion order does not matter.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(n, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// mKdV type-1 family feeding a Miura transform at this p: the sn sum for odd
// p, the sn product for p = 2, 4.
std::optional<ew_family> miura_source(int p) {
  if (ew_family_accepts(EW_MKDV1_SN_SUM_ODD, p)) return EW_MKDV1_SN_SUM_ODD;
  if (ew_family_accepts(EW_MKDV1_SN_PRODUCT_EVEN, p)) return EW_MKDV1_SN_PRODUCT_EVEN;
  return std::nullopt;
}

bool legal(ew_family family, int p) {
  return family == EW_MIURA_OF_MKDV1 ? miura_source(p).has_value() : ew_family_accepts(family, p) != 0;
}

// Builds the family; Miura outputs use miura_source(p) with source sign +1 and
// `sign` as the transform sign (flipping the source sign flips the transform).
ew_status make_solution(ew_family family, int p, double alpha, double beta, int sign, double m,
                        Handle& out) {
  ew_solution* raw = nullptr;
  if (family != EW_MIURA_OF_MKDV1) {
    const ew_status s = ew_solution_build(family, p, alpha, beta, sign, m, &raw);
    if (s == EW_OK) out.reset(raw);
    return s;
  }
  const auto source = miura_source(p);
  if (!source) return EW_ERR_USAGE;
  ew_status s = ew_solution_build(*source, p, alpha, beta, 1, m, &raw);
  if (s != EW_OK) return s;
  Handle v(raw, ew_solution_free);
  s = ew_solution_miura(v.get(), sign, &raw);
  if (s == EW_OK) out.reset(raw);
  return s;
}

std::vector<int> default_p(const RunConfig& cfg, std::vector<int> fallback) {
  return cfg.p_list.empty() ? fallback : cfg.p_list;
}

template <class T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> fallback) {
  return v.empty() ? fallback : v;
}

std::vector<double> m_values(const RunConfig& cfg, Grid fallback) {
  auto ms = expand(cfg.m_grid.value_or(fallback));
  for (double m : ms) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::invalid_argument("m=" + format_real(m) + " is outside [0, 1]");
    }
  }
  return ms;
}

}  // namespace

std::vector<double> expand(const Grid& g) {
  if (!(g.step > 0) || !std::isfinite(g.start) || !std::isfinite(g.stop)) {
    throw std::invalid_argument("grid needs finite bounds and step > 0");
  }
  if (g.stop < g.start) throw std::invalid_argument("grid stop is below start");
  std::vector<double> out;
  const double n = std::floor((g.stop - g.start) / g.step + 1e-9);
  for (double i = 0; i <= n; ++i) {
    const double v = std::round((g.start + i * g.step) * 1e12) / 1e12;
    out.push_back(std::min(v, g.stop));
  }
  return out;
}

CommandResult cmd_constants(const RunConfig& cfg) {
  CommandResult res;
  res.table.columns = {"kind", "p", "m", "value", "constancy_dev", "closed_form_value_if_known",
                       "abs_diff", "status"};
  const auto kinds = cfg.kinds.empty()
                         ? std::vector<ew_constant_kind>(std::begin(kAllKinds), std::end(kAllKinds))
                         : cfg.kinds;
  const auto ps = default_p(cfg, {1, 2, 3, 4, 5, 6});
  const auto ms = m_values(cfg, {0.1, 0.9, 0.1});

  struct Job {
    ew_constant_kind kind;
    int p;  // 0: Q, which has no p
    double m;
  };
  std::vector<Job> jobs;
  for (auto kind : kinds) {
    if (kind == EW_CONST_Q) {
      for (double m : ms) jobs.push_back({kind, 0, m});
      continue;
    }
    for (int p : ps) {
      for (double m : ms) jobs.push_back({kind, p, m});
    }
  }

  std::vector<Row> rows(jobs.size());
  std::vector<int> codes(jobs.size(), 0);
  std::vector<std::string> notes(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    Row& row = rows[i];
    row = {std::string(ew_constant_name(job.kind)),
           job.p ? Cell(std::int64_t{job.p}) : Cell(), job.m, {}, {}, {}, {}, {}};
    const int p = job.p ? job.p : 1;
    if (!ew_constant_accepts(job.kind, p)) {
      notes[i] = std::string("skipped: ") + ew_constant_name(job.kind) + " is not defined at p=" +
                 std::to_string(p);
      row[7] = std::string("illegal");
      return;
    }
    int known = 0;
    double closed = 0.0;
    if (ew_closed_form(job.kind, p, job.m, &known, &closed) == EW_OK && known) row[5] = closed;

    ew_constant c{};
    const ew_status s = ew_extract_constant(job.kind, p, job.m, cfg.samples, cfg.tol, &c);
    if (s == EW_OK || s == EW_ERR_NON_IDENTITY) {
      row[3] = c.value;
      row[4] = c.constancy_dev;
      if (known) row[6] = std::fabs(c.value - closed);
      if (s == EW_OK) {
        row[7] = std::string(c.continued ? "continued" : "ok");
      } else {
        row[7] = std::string("non-identity");
        codes[i] = 1;
      }
    } else if (s == EW_ERR_DIVERGENCE && known) {
      row[3] = closed;
      row[7] = std::string("limit");
    } else {
      row[7] = describe(s);
      codes[i] = exit_code_for(s);
    }
  });
  res.table.rows = std::move(rows);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!notes[i].empty()) res.warnings.push_back(notes[i]);
    res.exit_code = std::max(res.exit_code, codes[i]);
  }
  return res;
}

CommandResult cmd_figure1(const RunConfig& cfg) {
  CommandResult res;
  res.table.columns = {"m", "b_1", "b_2", "b_3", "b_4"};
  const double beta = cfg.betas.empty() ? 0.0 : cfg.betas.front();
  const auto ms = m_values(cfg, {0.0, 1.0, 0.02});
  std::vector<Row> rows(ms.size());
  std::vector<std::string> errors(ms.size());
  parallel_for(ms.size(), cfg.threads, [&](std::size_t i) {
    const double m = ms[i];
    Row row{m};
    for (int p = 1; p <= 4; ++p) {
      double b = 0.0;
      ew_status s = ew_velocity(EW_KDV_DN2_SUM, p, m, beta, &b);
      if (s == EW_ERR_DIVERGENCE) {
        // The p-dependence enters only through A(p, m), which vanishes at m = 1.
        int known = 0;
        double a = 1.0;
        if (ew_closed_form(EW_CONST_A, p, m, &known, &a) == EW_OK && known && a == 0.0) {
          s = ew_velocity(EW_KDV_DN2_SUM, 1, m, beta, &b);
        }
      }
      if (s != EW_OK) {
        errors[i] = "m=" + format_real(m) + " p=" + std::to_string(p) + ": " + describe(s);
        row.emplace_back();
        continue;
      }
      row.emplace_back(b);
    }
    rows[i] = std::move(row);
  });
  res.table.rows = std::move(rows);
  for (const auto& e : errors) {
    if (e.empty()) continue;
    res.warnings.push_back(e);
    res.exit_code = 1;
  }
  return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  CommandResult res;
  res.table.columns = {"family", "source", "p",       "m",       "alpha",     "beta",       "sign",
                       "velocity", "max_abs", "max_rel", "argmax_xi", "grid_points", "status"};
  const auto families = cfg.families.empty()
                            ? std::vector<ew_family>(std::begin(kAllFamilies), std::end(kAllFamilies))
                            : cfg.families;
  const bool explicit_p = !cfg.p_list.empty();
  const auto ps = default_p(cfg, {1, 2, 3, 4, 5, 6});
  const auto ms = m_values(cfg, {0.1, 0.9, 0.1});
  const auto alphas = or_default(cfg.alphas, {0.5, 1.0, 2.0});
  const auto betas = or_default(cfg.betas, {0.0, 1.0});
  const auto signs = or_default(cfg.signs, {1, -1});
  if (cfg.points < 2) throw std::invalid_argument("--points must be at least 2");

  struct Job {
    ew_family family;
    int p;
    double m, alpha, beta;
    int sign;
    bool illegal;
  };
  std::vector<Job> jobs;
  for (auto family : families) {
    const bool uses_beta = family == EW_KDV_DN2_SUM;
    for (int p : ps) {
      const bool ok = legal(family, p);
      if (!ok && !explicit_p) continue;
      if (!ok) {
        jobs.push_back({family, p, NAN, NAN, NAN, 0, true});
        continue;
      }
      for (double m : ms) {
        for (double alpha : alphas) {
          for (std::size_t b = 0; b < (uses_beta ? betas.size() : 1); ++b) {
            for (int sign : signs) {
              jobs.push_back({family, p, m, alpha, uses_beta ? betas[b] : 0.0, sign, false});
            }
          }
        }
      }
    }
  }

  std::vector<Row> rows(jobs.size());
  std::vector<int> codes(jobs.size(), 0);
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t i) {
    const Job& j = jobs[i];
    Row& row = rows[i];
    row.assign(res.table.columns.size(), Cell{});
    row[0] = std::string(ew_family_name(j.family));
    if (j.family == EW_MIURA_OF_MKDV1) {
      if (auto src = miura_source(j.p)) row[1] = std::string(ew_family_name(*src));
    }
    row[2] = std::int64_t{j.p};
    if (j.illegal) {
      row[12] = std::string("error: p=") + std::to_string(j.p) + " is not allowed for " +
                ew_family_name(j.family);
      codes[i] = 2;
      return;
    }
    row[3] = j.m;
    row[4] = j.alpha;
    row[5] = j.beta;
    row[6] = std::int64_t{j.sign};
    Handle w(nullptr, ew_solution_free);
    ew_status s = make_solution(j.family, j.p, j.alpha, j.beta, j.sign, j.m, w);
    ew_solution_info info{};
    if (s == EW_OK) s = ew_solution_info_get(w.get(), &info);
    if (s == EW_OK && cfg.corrupt_velocity) {
      info.velocity += 1.0;
      s = ew_solution_set_velocity(w.get(), info.velocity);
    }
    double lo = 0.0, hi = 0.0;
    if (s == EW_OK) s = ew_scan_interval(w.get(), &lo, &hi);
    ew_residual_report rep{};
    if (s == EW_OK) s = ew_residual_scan(w.get(), lo, hi, cfg.points, &rep);
    if (s != EW_OK) {
      row[12] = "error: " + describe(s);
      codes[i] = exit_code_for(s);
      return;
    }
    row[7] = info.velocity;
    row[8] = rep.max_abs;
    row[9] = rep.max_rel;
    row[10] = rep.argmax_xi;
    row[11] = std::int64_t{rep.grid_points};
    const bool pass = rep.max_rel <= cfg.tol;
    row[12] = std::string(pass ? "pass" : "fail");
    if (!pass) codes[i] = 1;
  });
  res.table.rows = std::move(rows);
  // A usage error outranks a verification failure.
  for (int c : codes) res.exit_code = std::max(res.exit_code, c);
  return res;
}

CommandResult cmd_sample(const RunConfig& cfg) {
  CommandResult res;
  res.table.columns = {"x", "t", "u"};
  const ew_family family = cfg.families.empty() ? EW_KDV_DN2_SUM : cfg.families.front();
  const int p = cfg.p_list.empty() ? 1 : cfg.p_list.front();
  const double m = cfg.m_grid ? m_values(cfg, {}).front() : 0.5;
  const double alpha = cfg.alphas.empty() ? 1.0 : cfg.alphas.front();
  const double beta = cfg.betas.empty() ? 0.0 : cfg.betas.front();
  const int sign = cfg.signs.empty() ? 1 : cfg.signs.front();
  const auto xs = expand(cfg.x_grid.value_or(Grid{0.0, 10.0, 0.05}));
  const auto ts = or_default(cfg.t_list, {0.0});

  if (!legal(family, p)) {
    res.warnings.push_back(std::string("p=") + std::to_string(p) + " is not allowed for " +
                           ew_family_name(family));
    res.exit_code = 2;
    return res;
  }
  Handle w(nullptr, ew_solution_free);
  const ew_status s = make_solution(family, p, alpha, beta, sign, m, w);
  if (s != EW_OK) {
    res.warnings.push_back(describe(s));
    res.exit_code = exit_code_for(s);
    return res;
  }
  for (double t : ts) {
    for (double x : xs) {
      double u = 0.0;
      const ew_status e = ew_solution_eval(w.get(), x, t, &u);
      if (e != EW_OK) {
        res.warnings.push_back(describe(e));
        res.exit_code = exit_code_for(e);
        return res;
      }
      res.table.rows.push_back({x, t, u});
    }
  }
  return res;
}

CommandResult run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::constants: return cmd_constants(cfg);
    case Command::figure1: return cmd_figure1(cfg);
    case Command::verify: return cmd_verify(cfg);
    case Command::sample: return cmd_sample(cfg);
  }
  throw std::logic_error("unknown command");
}

}  // namespace ellwave::cli
