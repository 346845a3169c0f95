#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cmab/errors.hpp"

namespace cmab {

struct ConstantEpsilon {
    double epsilon = 1.0;
    bool operator==(const ConstantEpsilon&) const = default;
};

/// epsilon_t = min{1, k/t}, k > 1.
struct InverseTime {
    double k = 2.0;
    bool operator==(const InverseTime&) const = default;
};

/// epsilon_t = values[t-1]; the last value is held past the end of the list.
struct ExplicitEpsilon {
    std::vector<double> values;
    bool operator==(const ExplicitEpsilon&) const = default;
};

/// Exploration probabilities epsilon_t in (0, 1], t = 1, 2, ...
class EpsilonSchedule {
public:
    using Kind = std::variant<ConstantEpsilon, InverseTime, ExplicitEpsilon>;

    EpsilonSchedule() : kind_(ConstantEpsilon{1.0}) {}

    static EpsilonSchedule constant(double eps) { return checked(ConstantEpsilon{eps}); }
    static EpsilonSchedule inverse_time(double k) { return checked(InverseTime{k}); }
    static EpsilonSchedule explicit_values(std::vector<double> v) {
        return checked(ExplicitEpsilon{std::move(v)});
    }
    static EpsilonSchedule unchecked(Kind kind) {
        EpsilonSchedule s;
        s.kind_ = std::move(kind);
        return s;
    }

    const Kind& kind() const { return kind_; }
    bool is_inverse_time() const { return std::holds_alternative<InverseTime>(kind_); }

    double at(std::uint64_t t) const {
        if (const auto* c = std::get_if<ConstantEpsilon>(&kind_)) return c->epsilon;
        if (const auto* inv = std::get_if<InverseTime>(&kind_))
            return std::min(1.0, inv->k / static_cast<double>(t));
        const auto& v = std::get<ExplicitEpsilon>(kind_).values;
        return v[std::min<std::uint64_t>(t, v.size()) - 1];
    }

    /// Empty string when valid.
    std::string issue() const {
        auto ok = [](double e) { return std::isfinite(e) && e > 0.0 && e <= 1.0; };
        if (const auto* c = std::get_if<ConstantEpsilon>(&kind_)) {
            if (!ok(c->epsilon)) return "schedule epsilon must lie in (0,1]";
        } else if (const auto* inv = std::get_if<InverseTime>(&kind_)) {
            if (!(std::isfinite(inv->k) && inv->k > 1.0)) return "inverse_time schedule requires k > 1";
        } else {
            const auto& v = std::get<ExplicitEpsilon>(kind_).values;
            if (v.empty()) return "explicit schedule needs at least one value";
            for (double e : v)
                if (!ok(e)) return "schedule epsilon must lie in (0,1] for every t";
        }
        return {};
    }

    bool operator==(const EpsilonSchedule&) const = default;

private:
    static EpsilonSchedule checked(Kind kind) {
        auto s = unchecked(std::move(kind));
        if (auto msg = s.issue(); !msg.empty()) throw ValidationError(ErrorCode::invalid_schedule, msg);
        return s;
    }

    Kind kind_;
};

}  // namespace cmab
