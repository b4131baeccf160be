// errors.hpp
// Error hierarchy shared by the library and the CLI.
// Each class carries the process exit code the CLI maps it to.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ptg {

enum class ExitCode : int {
  ok = 0,
  internal = 1,
  config = 2,       // bad config / violated precondition
  range = 3,        // query beyond the sieved range
  budget = 4,       // search budget exhausted
  verification = 5, // a constructed object failed its own checker
};

class Error : public std::runtime_error {
public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

private:
  ExitCode code_;
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::config, what) {}
};

class RangeExceededError : public Error {
public:
  RangeExceededError(double requested, uint64_t limit)
      : Error(ExitCode::range,
              "range exceeded: requested " + std::to_string(requested) +
                  " but sieve limit is " + std::to_string(limit)),
        requested_(requested), limit_(limit) {}
  double requested() const { return requested_; }
  uint64_t limit() const { return limit_; }

private:
  double requested_;
  uint64_t limit_;
};

class BudgetExceededError : public Error {
public:
  explicit BudgetExceededError(const std::string& what) : Error(ExitCode::budget, what) {}
};

class VerificationError : public Error {
public:
  explicit VerificationError(const std::string& what) : Error(ExitCode::verification, what) {}
};

} // namespace ptg
