#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace orliczdyn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Checked integer arithmetic left the int64 range.
class OverflowError : public Error {
public:
  using Error::Error;
};

/// Custom Young function evaluated outside its sample table.
class OutOfRange : public Error {
public:
  using Error::Error;
};

class NonFinite : public Error {
public:
  using Error::Error;
};

class TorsionElement : public Error {
public:
  explicit TorsionElement(std::int64_t order)
      : Error("translation element is torsion (order " + std::to_string(order) + ")"),
        order_(order) {}

  std::int64_t order() const noexcept { return order_; }

private:
  std::int64_t order_;
};

/// Summands of a witness vector do not have pairwise disjoint supports.
class SeparationViolated : public Error {
public:
  using Error::Error;
};

class TailUnbounded : public Error {
public:
  using Error::Error;
};

/// A checker was called on a system with a detected obstruction.
class ObstructionPresent : public Error {
public:
  using Error::Error;
};

/// Verdicts disagree with an implication that must hold; always a bug.
class InconsistentVerdicts : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

} // namespace orliczdyn
