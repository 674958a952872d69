#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace pidkit {

/// Malformed input: bad files, unknown variables, mismatched alphabets.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configured resource limit (the vertex cap) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, std::size_t cap,
                std::optional<double> best_so_far = std::nullopt)
      : std::runtime_error(what), cap_(cap), best_so_far_(best_so_far) {}

  std::size_t cap() const noexcept { return cap_; }
  /// Best objective seen before the cap was hit. Not certified optimal.
  std::optional<double> best_so_far() const noexcept { return best_so_far_; }

 private:
  std::size_t cap_;
  std::optional<double> best_so_far_;
};

/// An iterative solver stopped before reaching its tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double best_value, double gap)
      : std::runtime_error(what), best_value_(best_value), gap_(gap) {}

  double best_value() const noexcept { return best_value_; }
  double gap() const noexcept { return gap_; }

 private:
  double best_value_;
  double gap_;
};

/// Internal invariant broken; indicates a bug rather than bad input.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pidkit
