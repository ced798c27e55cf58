#pragma once

#include <stdexcept>
#include <string>

namespace biduct {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally malformed input: unknown labels, dimension mismatches,
/// unparseable files. The CLI maps these to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A numerical invariant failed. Carries the name of the invariant and the
/// observed deviation so callers can report it.
class InvariantError : public Error {
 public:
  InvariantError(std::string invariant, double deviation, const std::string& detail = {})
      : Error(invariant + " violated (deviation " + std::to_string(deviation) + ")" +
              (detail.empty() ? std::string{} : ": " + detail)),
        invariant_(std::move(invariant)),
        deviation_(deviation) {}

  const std::string& invariant() const noexcept { return invariant_; }
  double deviation() const noexcept { return deviation_; }

 private:
  std::string invariant_;
  double deviation_;
};

}  // namespace biduct
