#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cmab {

enum class ErrorCode {
    too_few_arms,
    empty_feasible_set,
    out_of_support,
    invalid_parameter,
    invalid_schedule,
    invalid_experiment,
    unsupported_distribution,
    tree_too_large,
    instance_too_large,
    horizon_too_small,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::too_few_arms: return "too_few_arms";
        case ErrorCode::empty_feasible_set: return "empty_feasible_set";
        case ErrorCode::out_of_support: return "out_of_support";
        case ErrorCode::invalid_parameter: return "invalid_parameter";
        case ErrorCode::invalid_schedule: return "invalid_schedule";
        case ErrorCode::invalid_experiment: return "invalid_experiment";
        case ErrorCode::unsupported_distribution: return "unsupported_distribution";
        case ErrorCode::tree_too_large: return "tree_too_large";
        case ErrorCode::instance_too_large: return "instance_too_large";
        case ErrorCode::horizon_too_small: return "horizon_too_small";
    }
    return "unknown";
}

/// Thrown when an input violates a documented invariant.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(ErrorCode code, const std::string& what)
        : std::invalid_argument(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace cmab
