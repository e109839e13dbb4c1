#pragma once

#include <stdexcept>
#include <string>

namespace ellwave {

enum class Errc {
  domain,               // argument outside the mathematical domain
  divergence,           // K(m) diverges (m = 1 where a finite period is needed)
  usage,                // illegal combination of otherwise valid arguments
  degenerate_sampling,  // too few usable sample arguments for a constant
  non_identity,         // sampled "constant" is not constant
  parse,                // malformed polynomial text
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ellwave
