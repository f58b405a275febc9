#pragma once

#include <stdexcept>
#include <string>

namespace efp {

// Malformed instance or allocation/pricing data. `code` is a stable keyword
// (EmptyBundle, IndexOutOfRange, NegativeValuation, BadCapacity, ...) and the
// message names the offending agent or item.
class ValidationError : public std::runtime_error {
public:
  ValidationError(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

// Unreadable or structurally wrong JSON; message carries line/field context.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& message)
      : std::runtime_error("ParseError: " + message) {}
};

// Operation invoked outside its contract (wrong supply kind, epsilon >= 1, ...).
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& message) : std::runtime_error(message) {}
};

// Exact exponential cover search refused: too many winners.
class GuardExceeded : public UsageError {
public:
  explicit GuardExceeded(const std::string& message) : UsageError("GuardExceeded: " + message) {}
};

// Dynamic program refused: max capacity above the configured bound.
class CapacityTooLarge : public UsageError {
public:
  explicit CapacityTooLarge(const std::string& message)
      : UsageError("CapacityTooLarge: " + message) {}
};

// Brute-force oracle refused: instance above its guard size.
class TooLarge : public UsageError {
public:
  explicit TooLarge(const std::string& message) : UsageError("TooLarge: " + message) {}
};

// Generator scale parameter does not make all valuations integral.
class BadScale : public UsageError {
public:
  explicit BadScale(const std::string& message) : UsageError("BadScale: " + message) {}
};

// A solver's own post-check failed; always a bug, never a user error.
class InternalCheckError : public std::logic_error {
public:
  explicit InternalCheckError(const std::string& message)
      : std::logic_error("internal consistency failure: " + message) {}
};

}  // namespace efp
