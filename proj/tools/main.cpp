#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace ellwave::cli;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T number(const std::string& s, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("bad ") + what + " '" + s + "'");
  }
  return v;
}

int sign_value(std::string s) {
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const int v = number<int>(s, "sign");
  if (v != 1 && v != -1) throw std::invalid_argument("sign must be +1 or -1");
  return v;
}

// "1,3,5" or "1..6"
std::vector<int> p_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(number<int>(part, "p"));
      continue;
    }
    const int lo = number<int>(part.substr(0, dots), "p");
    const int hi = number<int>(part.substr(dots + 2), "p");
    if (hi < lo) throw std::invalid_argument("empty p range '" + part + "'");
    for (int p = lo; p <= hi; ++p) out.push_back(p);
  }
  return out;
}

// "0.5" or "start:stop:step"
Grid grid(const std::string& s, const char* what) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) {
    const double v = number<double>(parts[0], what);
    return {v, v, 1.0};
  }
  if (parts.size() != 3) throw std::invalid_argument(std::string(what) + " must be v or start:stop:step");
  Grid g{number<double>(parts[0], what), number<double>(parts[1], what),
         number<double>(parts[2], what)};
  expand(g);  // validates
  return g;
}

std::vector<double> reals(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(number<double>(part, what));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Periodic KdV / mKdV travelling waves from lattice sums of Jacobi functions"};
  app.require_subcommand(1);

  std::string families, kinds, ps, m, alphas, betas, signs, format = "csv", out, xs, ts;
  RunConfig cfg;

  auto* constants = app.add_subcommand("constants", "identity constants A..L and Q");
  auto* figure1 = app.add_subcommand("figure1", "KdV velocities b_1..b_4 over m");
  auto* verify = app.add_subcommand("verify", "PDE residual certification sweep");
  auto* sample = app.add_subcommand("sample", "sample u(x, t) of one solution");

  for (auto* sub : {constants, figure1, verify, sample}) {
    sub->add_option("--p", ps, "comma list or a..b range");
    sub->add_option("--m", m, "value or start:stop:step");
    sub->add_option("--beta", betas, "comma list (KdV only)");
    sub->add_option("--tol", cfg.tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", out, "output file (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker threads (0: all cores)");
  }
  for (auto* sub : {verify, sample}) {
    sub->add_option("--family", families,
                    "comma list of kdv, mkdv1-sum, mkdv1-product, mkdv2-dn, mkdv2-cn, mkdv2-alt, miura");
    sub->add_option("--alpha", alphas, "comma list");
    sub->add_option("--sign", signs, "comma list of +1/-1");
  }
  constants->add_option("--kind", kinds, "comma list of A..L, Q");
  constants->add_option("--samples", cfg.samples, "base arguments per constant")
      ->check(CLI::Range(3, 100000));
  verify->add_option("--points", cfg.points, "grid points per period");
  verify->add_flag("--corrupt-velocity", cfg.corrupt_velocity, "shift every velocity by +1");
  sample->add_option("--x", xs, "start:stop:step");
  sample->add_option("--t", ts, "comma list of times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*constants) cfg.command = Command::constants;
    if (*figure1) cfg.command = Command::figure1;
    if (*verify) cfg.command = Command::verify;
    if (*sample) cfg.command = Command::sample;
    if (!families.empty()) {
      for (const auto& name : split(families, ',')) {
        ew_family f;
        if (ew_family_from_name(name.c_str(), &f) != EW_OK) throw std::invalid_argument(ew_last_error());
        cfg.families.push_back(f);
      }
    }
    if (!kinds.empty()) {
      for (const auto& name : split(kinds, ',')) {
        ew_constant_kind k;
        if (ew_constant_from_name(name.c_str(), &k) != EW_OK) throw std::invalid_argument(ew_last_error());
        cfg.kinds.push_back(k);
      }
    }
    if (!ps.empty()) cfg.p_list = p_list(ps);
    if (!m.empty()) cfg.m_grid = grid(m, "m");
    if (!alphas.empty()) cfg.alphas = reals(alphas, "alpha");
    if (!betas.empty()) cfg.betas = reals(betas, "beta");
    if (!signs.empty()) {
      for (const auto& s : split(signs, ',')) cfg.signs.push_back(sign_value(s));
    }
    if (!xs.empty()) cfg.x_grid = grid(xs, "x");
    if (!ts.empty()) cfg.t_list = reals(ts, "t");
    cfg.format = format == "json" ? Format::json : Format::csv;
    if (!out.empty()) cfg.output_path = out;
  } catch (const std::exception& e) {
    std::cerr << "ellwave: " << e.what() << "\n";
    return 2;
  }

  CommandResult result;
  try {
    result = run(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "ellwave: " << e.what() << "\n";
    return 2;
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";

  const std::string text = cfg.format == Format::json ? to_json(result.table) : to_csv(result.table);
  if (cfg.output_path) {
    std::ofstream file(*cfg.output_path, std::ios::binary);
    file << text;
    if (!file) {
      std::cerr << "ellwave: cannot write " << *cfg.output_path << "\n";
      return 2;
    }
  } else {
    std::fwrite(text.data(), 1, text.size(), stdout);
  }
  return result.exit_code;
}
