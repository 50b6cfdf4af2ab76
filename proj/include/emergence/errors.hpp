#pragma once

#include <stdexcept>
#include <string>

namespace emergence {

// Configuration and precondition failures (CLI exit code 1).
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Failures that happen while running an otherwise valid pipeline (exit code 2).
class RuntimeFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class NonDividingBlock : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class UnfittedDiscretizer : public RuntimeFailure {
public:
  using RuntimeFailure::RuntimeFailure;
};

class DegenerateSample : public RuntimeFailure {
public:
  using RuntimeFailure::RuntimeFailure;
};

class NegativeSnr : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class NoInteriorPeak : public RuntimeFailure {
public:
  using RuntimeFailure::RuntimeFailure;
};

class InsufficientScales : public ConfigError {
public:
  using ConfigError::ConfigError;
};

class IoError : public RuntimeFailure {
public:
  using RuntimeFailure::RuntimeFailure;
};

} // namespace emergence
