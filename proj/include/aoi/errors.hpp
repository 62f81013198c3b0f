#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace aoi {

// Raised by config/argument validation. Collects every violated field so a
// caller sees the full list at once instead of fixing one field per run.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> fields)
      : std::runtime_error(join(fields)), fields_(std::move(fields)) {}

  const std::vector<std::string>& fields() const { return fields_; }

 private:
  static std::string join(const std::vector<std::string>& fields) {
    std::string msg = "validation failed:";
    for (const auto& f : fields) {
      msg += "\n  - " + f;
    }
    return msg;
  }

  std::vector<std::string> fields_;
};

// Fixed-point iteration exhausted max_iter. Carries the last residual(s).
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// A resource guard tripped (e.g. the oracle candidate-count cap).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace aoi
