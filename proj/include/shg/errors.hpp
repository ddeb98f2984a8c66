#pragma once

#include <stdexcept>
#include <string>

namespace shg {

/// Invalid configuration or violated precondition (band limits, grid sizes,
/// parameter ranges). The CLI maps this to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed to produce a trustworthy answer: Picard
/// non-convergence, non-finite values, runaway mass. Exit status 3 in the CLI.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, double time, double residual)
      : std::runtime_error(what), time_(time), residual_(residual) {}

  double time() const noexcept { return time_; }
  double residual() const noexcept { return residual_; }

 private:
  double time_;
  double residual_;
};

namespace detail {
inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}
}  // namespace detail

}  // namespace shg
