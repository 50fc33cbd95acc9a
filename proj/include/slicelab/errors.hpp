#pragma once

#include <stdexcept>
#include <string>

namespace slicelab {

/// Invalid argument to a sampler or estimator.
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A request whose exact-enumeration or trial cost exceeds the configured
/// budget. Carries a human-readable cost estimate; the CLI maps it to exit
/// code 2.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// A weight model that cannot be sampled (e.g. rejection acceptance too low).
class ModelError : public std::runtime_error {
public:
    explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slicelab
