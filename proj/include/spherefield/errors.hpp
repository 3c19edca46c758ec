#pragma once

#include <stdexcept>
#include <string>

namespace spherefield {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Argument inside the mathematical domain but outside what is implemented.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid or sample resolution too coarse for the requested operation.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A kernel or operator multiplier has a zero or negative base.
class SingularModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller-supplied data broke an invariant the operation relies on.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class InsufficientSamplesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoSamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spherefield
