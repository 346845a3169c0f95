#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "cmab/errors.hpp"
#include "cmab/schedule.hpp"

namespace cmab {

/// Running sum of epsilon_n with Neumaier compensation.
class ExplorationMass {
public:
    ExplorationMass(const EpsilonSchedule& schedule, std::size_t num_arms)
        : schedule_(schedule), num_arms_(num_arms) {}

    /// Advances the partial sum to t (t must not decrease).
    void advance_to(std::uint64_t t) {
        for (; t_ < t; ++t_) add(schedule_.at(t_ + 1));
    }

    std::uint64_t t() const { return t_; }
    double sum() const { return sum_ + compensation_; }
    /// x_t = sum / (2|A|).
    double x() const { return sum() / (2.0 * static_cast<double>(num_arms_)); }

private:
    void add(double v) {
        const double s = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            compensation_ += (sum_ - s) + v;
        else
            compensation_ += (v - s) + sum_;
        sum_ = s;
    }

    EpsilonSchedule schedule_;
    std::size_t num_arms_;
    std::uint64_t t_ = 0;
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// x_t = (1 / 2|A|) * sum_{n=1}^{t} epsilon_n, summed term by term.
inline double cumulative_x(const EpsilonSchedule& schedule, std::uint64_t t, std::size_t num_arms) {
    ExplorationMass mass(schedule, num_arms);
    mass.advance_to(t);
    return mass.x();
}

struct BoundInputs {
    std::size_t num_arms = 2;
    double delta = 0.0;
    double rho = 0.0;
    EpsilonSchedule schedule;
    std::uint64_t t = 1;
};

struct BoundReport {
    std::uint64_t t = 0;
    double x_t = 0.0;
    double epsilon_t = 0.0;
    double factor_eps = 0.0;
    double factor_count = 0.0;
    double factor_feas = 0.0;
    double factor_reward = 0.0;
    double raw_product = 0.0;
    double clamped = 0.0;
    /// No certified lower bound: some factor is <= 0.
    bool vacuous = true;
};

/// Four-factor lower bound evaluated at a given x_t and epsilon_t.
///
/// A factor <= 0 means the corresponding probability term has no positive
/// lower bound, so the product certifies nothing even when two negative
/// factors multiply to a positive number. Such reports are vacuous and
/// clamp to 0; raw_product keeps the literal product.
inline BoundReport theorem1_bound_at(std::size_t num_arms, double delta, double rho, double epsilon_t,
                                     double x_t) {
    const double k = static_cast<double>(num_arms);
    BoundReport r;
    r.x_t = x_t;
    r.epsilon_t = epsilon_t;
    r.factor_eps = 1.0 - epsilon_t / k;
    r.factor_count = 1.0 - k * std::exp(-x_t / 5.0);
    r.factor_feas = 1.0 - 2.0 * k * std::exp(-2.0 * delta * delta * x_t);
    r.factor_reward = 1.0 - 2.0 * k * std::exp(-0.5 * rho * rho * x_t);
    r.raw_product = r.factor_eps * r.factor_count * r.factor_feas * r.factor_reward;
    r.vacuous = !(r.factor_eps > 0.0 && r.factor_count > 0.0 && r.factor_feas > 0.0 && r.factor_reward > 0.0);
    r.clamped = r.vacuous ? 0.0 : std::clamp(r.raw_product, 0.0, 1.0);
    return r;
}

inline void check(const BoundInputs& in) {
    if (in.num_arms < 2) throw ValidationError(ErrorCode::too_few_arms, "bound needs |A| >= 2");
    if (!(in.delta >= 0.0) || !std::isfinite(in.delta))
        throw ValidationError(ErrorCode::invalid_parameter, "delta must be >= 0");
    if (!(in.rho >= 0.0) || !std::isfinite(in.rho))
        throw ValidationError(ErrorCode::invalid_parameter, "rho must be >= 0");
    if (in.t < 1) throw ValidationError(ErrorCode::invalid_parameter, "t must be >= 1");
    if (auto msg = in.schedule.issue(); !msg.empty()) throw ValidationError(ErrorCode::invalid_schedule, msg);
}

inline BoundReport theorem1_bound(const BoundInputs& in) {
    check(in);
    auto r = theorem1_bound_at(in.num_arms, in.delta, in.rho, in.schedule.at(in.t),
                               cumulative_x(in.schedule, in.t, in.num_arms));
    r.t = in.t;
    return r;
}

enum class CorollaryVariant {
    derived_consistent,  // third exponent k rho^2 / (4|A|)
    paper_literal,       // third exponent k rho / (4|A|)
};

constexpr std::string_view to_string(CorollaryVariant v) {
    return v == CorollaryVariant::derived_consistent ? "derived_consistent" : "paper_literal";
}

inline CorollaryVariant parse_corollary_variant(std::string_view s) {
    if (s == "derived_consistent") return CorollaryVariant::derived_consistent;
    if (s == "paper_literal") return CorollaryVariant::paper_literal;
    throw ValidationError(ErrorCode::invalid_parameter,
                          "unknown variant '" + std::string(s) +
                              "' (expected derived_consistent or paper_literal)");
}

struct CorollaryParams {
    double k = 2.0;
    double alpha = 0.0;
    double beta = 0.0;
    CorollaryVariant variant = CorollaryVariant::derived_consistent;
};

struct CorollaryReport {
    CorollaryParams params;
    double raw = 0.0;
    double value = 0.0;  // raw clamped to [0, 1]
};

namespace detail {

struct CorollaryExponents {
    double count, feas, reward;
};

inline CorollaryExponents corollary_exponents(double k, std::size_t num_arms, double delta, double rho,
                                              CorollaryVariant variant) {
    const double a = static_cast<double>(num_arms);
    const double r = variant == CorollaryVariant::derived_consistent ? rho * rho : rho;
    return {k / (10.0 * a), delta * delta * k / a, k * r / (4.0 * a)};
}

// log(beta); beta itself can overflow for large k.
inline double corollary_log_beta(double k, std::size_t num_arms, const CorollaryExponents& e) {
    const double a = static_cast<double>(num_arms);
    const double lk = std::log(k);
    return std::max({std::log(a) + e.count * lk, std::log(2.0 * a) + e.feas * lk,
                     std::log(2.0 * a) + e.reward * lk});
}

}  // namespace detail

inline CorollaryParams corollary_params(double k, std::size_t num_arms, double delta, double rho,
                                        CorollaryVariant variant) {
    const auto e = detail::corollary_exponents(k, num_arms, delta, rho, variant);
    return {k, std::min({e.count, e.feas, e.reward}),
            std::exp(detail::corollary_log_beta(k, num_arms, e)), variant};
}

/// Closed-form bound (1 - k/(|A| t)) (1 - beta / t^alpha)^3 for
/// epsilon_t = min{1, k/t} and t >= k.
inline CorollaryReport corollary_bound(double k, std::size_t num_arms, double delta, double rho,
                                       double t, CorollaryVariant variant = CorollaryVariant::derived_consistent) {
    if (!(k > 1.0) || !std::isfinite(k)) throw ValidationError(ErrorCode::invalid_schedule, "corollary requires k > 1");
    if (num_arms < 2) throw ValidationError(ErrorCode::too_few_arms, "bound needs |A| >= 2");
    if (!(delta >= 0.0) || !(rho >= 0.0))
        throw ValidationError(ErrorCode::invalid_parameter, "delta and rho must be >= 0");
    if (!(t >= k))
        throw ValidationError(ErrorCode::horizon_too_small, "corollary bound holds only for t >= k");

    const auto e = detail::corollary_exponents(k, num_arms, delta, rho, variant);
    CorollaryReport rep;
    rep.params = {k, std::min({e.count, e.feas, e.reward}),
                  std::exp(detail::corollary_log_beta(k, num_arms, e)), variant};
    const double ratio = std::exp(detail::corollary_log_beta(k, num_arms, e) - rep.params.alpha * std::log(t));
    const double inner = 1.0 - ratio;
    rep.raw = (1.0 - k / (static_cast<double>(num_arms) * t)) * inner * inner * inner;
    rep.value = std::isnan(rep.raw) ? 0.0 : std::clamp(rep.raw, 0.0, 1.0);
    return rep;
}

/// Smallest k with alpha >= 1 under the given variant.
inline double min_k_for_unit_alpha(std::size_t num_arms, double delta, double rho, CorollaryVariant variant) {
    const double a = static_cast<double>(num_arms);
    const double r = variant == CorollaryVariant::derived_consistent ? rho * rho : rho;
    return std::max({10.0 * a, a / (delta * delta), 4.0 * a / r});
}

/// Hoeffding lower-tail bound exp(-2 h^2 / j) for a sum of j variables in [0,1].
inline double hoeffding_tail(double h, std::uint64_t j) {
    if (!(h >= 0.0)) throw ValidationError(ErrorCode::invalid_parameter, "hoeffding_tail requires h >= 0");
    if (j < 1) throw ValidationError(ErrorCode::invalid_parameter, "hoeffding_tail requires j >= 1");
    return std::exp(-2.0 * h * h / static_cast<double>(j));
}

/// Bernstein lower-tail bound exp(-(h^2/2) / (sigma^2 + h/2)).
inline double bernstein_tail(double h, double sigma_sq) {
    if (!(h >= 0.0) || !(sigma_sq >= 0.0))
        throw ValidationError(ErrorCode::invalid_parameter, "bernstein_tail requires h, sigma^2 >= 0");
    if (h == 0.0 && sigma_sq == 0.0)
        throw ValidationError(ErrorCode::invalid_parameter, "bernstein_tail undefined for h = sigma^2 = 0");
    return std::exp(-(0.5 * h * h) / (sigma_sq + 0.5 * h));
}

}  // namespace cmab
