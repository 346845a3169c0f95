#pragma once

#include <cassert>
#include <cmath>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "cmab/errors.hpp"
#include "cmab/random.hpp"

namespace cmab {

struct PointMass {
    double value = 0.0;
    bool operator==(const PointMass&) const = default;
};

struct Bernoulli {
    double p = 0.0;
    bool operator==(const Bernoulli&) const = default;
};

/// Finite support: values[i] occurs with probability probs[i].
struct Discrete {
    std::vector<double> values;
    std::vector<double> probs;
    bool operator==(const Discrete&) const = default;
};

struct Beta {
    double shape1 = 1.0;
    double shape2 = 1.0;
    bool operator==(const Beta&) const = default;
};

/// One atom of a finite-support law.
struct Atom {
    double value;
    double prob;
};

/// Bounded-support law on [0, 1]. Immutable once built; use the named
/// constructors, which reject invalid parameters.
class Distribution {
public:
    using Kind = std::variant<PointMass, Bernoulli, Discrete, Beta>;

    Distribution() : kind_(PointMass{0.0}) {}

    static Distribution point_mass(double v) { return checked(PointMass{v}); }
    static Distribution bernoulli(double p) { return checked(Bernoulli{p}); }
    static Distribution discrete(std::vector<double> values, std::vector<double> probs) {
        return checked(Discrete{std::move(values), std::move(probs)});
    }
    static Distribution beta(double shape1, double shape2) { return checked(Beta{shape1, shape2}); }

    /// Builds without validation. validate() reports what is wrong.
    static Distribution unchecked(Kind kind) {
        Distribution d;
        d.kind_ = std::move(kind);
        return d;
    }

    const Kind& kind() const { return kind_; }

    std::string kind_name() const {
        return std::visit(
            [](const auto& k) -> std::string {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, PointMass>) return "point_mass";
                else if constexpr (std::is_same_v<T, Bernoulli>) return "bernoulli";
                else if constexpr (std::is_same_v<T, Discrete>) return "discrete";
                else return "beta";
            },
            kind_);
    }

    /// Empty when every invariant holds; otherwise a description of the first
    /// violation together with its code.
    std::pair<ErrorCode, std::string> first_issue() const;
    bool valid() const { return first_issue().second.empty(); }

    double mean() const {
        return std::visit(
            [](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return k.value;
                } else if constexpr (std::is_same_v<T, Bernoulli>) {
                    return k.p;
                } else if constexpr (std::is_same_v<T, Discrete>) {
                    double m = 0.0;
                    for (std::size_t i = 0; i < k.values.size(); ++i) m += k.values[i] * k.probs[i];
                    return m;
                } else {
                    return k.shape1 / (k.shape1 + k.shape2);
                }
            },
            kind_);
    }

    // Carried as derived moments; none of the strategy or bound code reads them.
    double variance() const {
        return std::visit(
            [this](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return 0.0;
                } else if constexpr (std::is_same_v<T, Bernoulli>) {
                    return k.p * (1.0 - k.p);
                } else if constexpr (std::is_same_v<T, Discrete>) {
                    const double m = mean();
                    double v = 0.0;
                    for (std::size_t i = 0; i < k.values.size(); ++i) {
                        const double d = k.values[i] - m;
                        v += d * d * k.probs[i];
                    }
                    return v;
                } else {
                    const double s = k.shape1 + k.shape2;
                    return k.shape1 * k.shape2 / (s * s * (s + 1.0));
                }
            },
            kind_);
    }

    bool finite_support() const { return !std::holds_alternative<Beta>(kind_); }

    /// Atoms with positive probability. Empty for continuous laws.
    std::vector<Atom> atoms() const {
        return std::visit(
            [](const auto& k) -> std::vector<Atom> {
                using T = std::decay_t<decltype(k)>;
                std::vector<Atom> out;
                if constexpr (std::is_same_v<T, PointMass>) {
                    out.push_back({k.value, 1.0});
                } else if constexpr (std::is_same_v<T, Bernoulli>) {
                    if (k.p < 1.0) out.push_back({0.0, 1.0 - k.p});
                    if (k.p > 0.0) out.push_back({1.0, k.p});
                } else if constexpr (std::is_same_v<T, Discrete>) {
                    for (std::size_t i = 0; i < k.values.size(); ++i)
                        if (k.probs[i] > 0.0) out.push_back({k.values[i], k.probs[i]});
                }
                return out;
            },
            kind_);
    }

    double sample(RandomSource& rng) const {
        const double x = std::visit(
            [&rng](const auto& k) -> double {
                using T = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<T, PointMass>) {
                    return k.value;
                } else if constexpr (std::is_same_v<T, Bernoulli>) {
                    return rng.bernoulli(k.p) ? 1.0 : 0.0;
                } else if constexpr (std::is_same_v<T, Discrete>) {
                    const double u = rng.uniform01();
                    double cum = 0.0;
                    std::size_t last = 0;
                    for (std::size_t i = 0; i < k.values.size(); ++i) {
                        if (k.probs[i] <= 0.0) continue;
                        last = i;
                        cum += k.probs[i];
                        if (u < cum) return k.values[i];
                    }
                    return k.values[last];
                } else {
                    // X / (X + Y) with X ~ Gamma(a), Y ~ Gamma(b).
                    std::gamma_distribution<double> ga(k.shape1, 1.0);
                    std::gamma_distribution<double> gb(k.shape2, 1.0);
                    const double x = ga(rng.engine());
                    const double y = gb(rng.engine());
                    const double s = x + y;
                    return s > 0.0 ? x / s : 0.5;
                }
            },
            kind_);
        assert(x >= 0.0 && x <= 1.0);
        return x;
    }

    bool operator==(const Distribution&) const = default;

private:
    static Distribution checked(Kind kind) {
        Distribution d = unchecked(std::move(kind));
        auto [code, msg] = d.first_issue();
        if (!msg.empty()) throw ValidationError(code, msg);
        return d;
    }

    Kind kind_;
};

inline std::pair<ErrorCode, std::string> Distribution::first_issue() const {
    auto in_unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    return std::visit(
        [&](const auto& k) -> std::pair<ErrorCode, std::string> {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                if (!in_unit(k.value))
                    return {ErrorCode::out_of_support, "point_mass value must lie in [0,1]"};
            } else if constexpr (std::is_same_v<T, Bernoulli>) {
                if (!in_unit(k.p)) return {ErrorCode::invalid_parameter, "bernoulli p must lie in [0,1]"};
            } else if constexpr (std::is_same_v<T, Discrete>) {
                if (k.values.empty() || k.values.size() != k.probs.size())
                    return {ErrorCode::invalid_parameter,
                            "discrete needs equally many values and probs (at least one)"};
                double total = 0.0;
                for (std::size_t i = 0; i < k.values.size(); ++i) {
                    if (!in_unit(k.values[i]))
                        return {ErrorCode::out_of_support, "discrete values must lie in [0,1]"};
                    if (!std::isfinite(k.probs[i]) || k.probs[i] < 0.0)
                        return {ErrorCode::invalid_parameter, "discrete probs must be nonnegative"};
                    total += k.probs[i];
                }
                if (std::abs(total - 1.0) > 1e-12)
                    return {ErrorCode::invalid_parameter, "discrete probs must sum to 1"};
            } else {
                if (!(std::isfinite(k.shape1) && k.shape1 > 0.0 && std::isfinite(k.shape2) && k.shape2 > 0.0))
                    return {ErrorCode::invalid_parameter, "beta shapes must be > 0"};
            }
            return {ErrorCode::invalid_parameter, ""};
        },
        kind_);
}

}  // namespace cmab
