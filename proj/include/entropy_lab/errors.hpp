#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entropy_lab {

// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Root finder called on an interval without a sign change.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quadrature or iteration failed to reach its tolerance.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data that cannot be reduced (zero pooled variance, constant sample).
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: parse failures, unsorted grids, bad configs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failure inside one Monte Carlo replication, tagged with its index.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::size_t replication, const std::string& what)
      : std::runtime_error("replication " + std::to_string(replication) + ": " + what),
        replication_(replication) {}

  std::size_t replication() const noexcept { return replication_; }

 private:
  std::size_t replication_;
};

}  // namespace entropy_lab
