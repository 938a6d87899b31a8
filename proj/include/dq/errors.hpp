#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dq {

/// Operands live on different numbers of modes, or a matrix/vector has the
/// wrong size for its truncation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition on a value does not hold (non-Hermitian density,
/// trace not one, m = 0 with a k = 0 mode, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Distribution-level evaluation was requested for an ordering whose
/// quasiprobability is singular (s > 0).
class UnsupportedOrderError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed user input: symbol text, state text, CSV, config files.
/// `offset` is a byte offset for single-line inputs and a 1-based line number
/// for line-oriented inputs; `expected` lists acceptable tokens when known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset,
             std::vector<std::string> expected = {})
      : std::runtime_error(message + " at offset " + std::to_string(offset) +
                           describe(expected)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  static std::string describe(const std::vector<std::string>& expected) {
    if (expected.empty()) return {};
    std::string out = " (expected one of:";
    for (const auto& e : expected) out += " " + e;
    return out + ")";
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// A variable refers to a mode that does not exist.
class IndexError : public ParseError {
 public:
  IndexError(const std::string& variable, std::size_t offset,
             std::size_t mode_count)
      : ParseError("variable '" + variable + "' is out of range for " +
                       std::to_string(mode_count) + " mode(s)",
                   offset),
        variable_(variable) {}

  const std::string& variable() const noexcept { return variable_; }

 private:
  std::string variable_;
};

/// A power was negative, fractional, complex, or too large.
class ExponentError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace dq
