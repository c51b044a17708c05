#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace rowloss {

// Parameters shared by every closed-form quantity: n rows, k variables (or
// g variable groups when reading k through the group lens), and q_star, the
// uniform upper bound on the conditional probability that a cell is observed
// given an all-observed prefix. q_star = 1 is outside the model and rejected.
struct BoundQuery {
    std::uint64_t n;
    std::uint64_t k;
    double q_star;

    BoundQuery(std::uint64_t n_, std::uint64_t k_, double q_star_) : n(n_), k(k_), q_star(q_star_) {
        if (n == 0) throw std::invalid_argument("BoundQuery: n must be >= 1");
        if (k == 0) throw std::invalid_argument("BoundQuery: k (or g) must be >= 1");
        if (!(q_star >= 0.0 && q_star < 1.0))
            throw std::invalid_argument("BoundQuery: q_star must lie in [0,1)");
    }
};

// (1 - q*^k)^n: the sharp lower bound on the probability that listwise
// deletion removes every row. Evaluated as exp(n*log1p(-exp(k*log q*))) so
// n ~ 1e4, k ~ 1e3 does not underflow; q* = 0 short-circuits to exactly 1.
inline double p_all_lower_bound(const BoundQuery& q) {
    if (q.q_star == 0.0) return 1.0;
    const double qk = std::exp(static_cast<double>(q.k) * std::log(q.q_star));
    return std::exp(static_cast<double>(q.n) * std::log1p(-qk));
}

inline double p_all_lower_bound(std::uint64_t n, std::uint64_t k, double q_star) {
    return p_all_lower_bound(BoundQuery(n, k, q_star));
}

// 1 - (1 - q*^k)^n computed without cancellation; this is the number to read
// when the bound itself is indistinguishable from 1.
inline double p_all_lower_bound_complement(const BoundQuery& q) {
    if (q.q_star == 0.0) return 0.0;
    const double qk = std::exp(static_cast<double>(q.k) * std::log(q.q_star));
    return -std::expm1(static_cast<double>(q.n) * std::log1p(-qk));
}

inline double p_all_lower_bound_complement(std::uint64_t n, std::uint64_t k, double q_star) {
    return p_all_lower_bound_complement(BoundQuery(n, k, q_star));
}

// 1 - q*^k: upper bound on the expected proportion of rows lost, independent
// of n. Identical to p_all_lower_bound with n = 1.
inline double expected_missing_prop_bound(std::uint64_t k, double q_star) {
    if (k == 0) throw std::invalid_argument("expected_missing_prop_bound: k must be >= 1");
    if (!(q_star >= 0.0 && q_star < 1.0))
        throw std::invalid_argument("expected_missing_prop_bound: q_star must lie in [0,1)");
    if (q_star == 0.0) return 1.0;
    return -std::expm1(static_cast<double>(k) * std::log(q_star));
}

// Largest k with (1 - q*^k)^n <= target. Closed form
// floor(log(1 - target^(1/n)) / log(q*)), then corrected by a +/-1 scan of
// direct bound evaluations, so the returned k always satisfies
// bound(k) <= target < bound(k+1). Returns 0 when even k = 1 exceeds the
// target. q_star and target must lie strictly inside (0,1).
inline std::uint64_t max_k_for_target(std::uint64_t n, double q_star, double target) {
    if (n == 0) throw std::invalid_argument("max_k_for_target: n must be >= 1");
    if (!(q_star > 0.0 && q_star < 1.0))
        throw std::domain_error("max_k_for_target: q_star must lie strictly in (0,1)");
    if (!(target > 0.0 && target < 1.0))
        throw std::domain_error("max_k_for_target: target must lie strictly in (0,1)");

    // 1 - target^(1/n) = -expm1(log(target)/n), safe for n up to ~1e15
    const double one_minus_root = -std::expm1(std::log(target) / static_cast<double>(n));
    const double guess = std::floor(std::log(one_minus_root) / std::log(q_star));
    std::uint64_t k = guess < 1.0 ? 0 : static_cast<std::uint64_t>(guess);

    const auto bound_at = [&](std::uint64_t kk) {
        return kk == 0 ? 0.0 : p_all_lower_bound(n, kk, q_star);
    };
    while (bound_at(k + 1) <= target) ++k;  // terminates: bound -> 1 > target as k grows
    while (k > 0 && bound_at(k) > target) --k;
    return k;
}

// The sequence k = f(n) the asymptotics run along. Evaluates as
// max(1, floor(shape(n))) with natural logs, so the range stays in the
// positive integers.
class GrowthFunction {
public:
    enum class Kind { PowerOfLog, Polynomial, Logarithmic, Constant };

    static GrowthFunction power_of_log(double exponent) {  // (log n)^c
        if (!(exponent > 0.0))
            throw std::invalid_argument("GrowthFunction: power-of-log exponent must be > 0");
        return GrowthFunction(Kind::PowerOfLog, exponent, 0);
    }
    static GrowthFunction polynomial(double exponent) {  // n^c
        if (!(exponent > 0.0))
            throw std::invalid_argument("GrowthFunction: polynomial exponent must be > 0");
        return GrowthFunction(Kind::Polynomial, exponent, 0);
    }
    static GrowthFunction logarithmic() { return GrowthFunction(Kind::Logarithmic, 0.0, 0); }
    static GrowthFunction constant(std::uint64_t value) {
        if (value == 0) throw std::invalid_argument("GrowthFunction: constant value must be >= 1");
        return GrowthFunction(Kind::Constant, 0.0, value);
    }

    Kind kind() const { return kind_; }
    double exponent() const { return exponent_; }
    std::uint64_t value() const { return value_; }

    std::string label() const {
        char buf[48];
        switch (kind_) {
            case Kind::PowerOfLog:
                std::snprintf(buf, sizeof buf, "plog:%g", exponent_);
                return buf;
            case Kind::Polynomial:
                std::snprintf(buf, sizeof buf, "poly:%g", exponent_);
                return buf;
            case Kind::Logarithmic:
                return "log";
            case Kind::Constant:
                return "const:" + std::to_string(value_);
        }
        return "";
    }

private:
    GrowthFunction(Kind kind, double exponent, std::uint64_t value)
        : kind_(kind), exponent_(exponent), value_(value) {}

    Kind kind_;
    double exponent_;
    std::uint64_t value_;
};

inline std::uint64_t growth_eval(const GrowthFunction& f, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("growth_eval: n must be >= 1");
    double shape = 0.0;
    switch (f.kind()) {
        case GrowthFunction::Kind::PowerOfLog:
            shape = std::pow(std::log(static_cast<double>(n)), f.exponent());
            break;
        case GrowthFunction::Kind::Polynomial:
            shape = std::pow(static_cast<double>(n), f.exponent());
            break;
        case GrowthFunction::Kind::Logarithmic:
            shape = std::log(static_cast<double>(n));
            break;
        case GrowthFunction::Kind::Constant:
            return f.value();
    }
    if (shape >= 9.0e18) throw std::overflow_error("growth_eval: k(n) exceeds uint64 range");
    const double k = std::floor(shape);
    return k < 1.0 ? 1 : static_cast<std::uint64_t>(k);
}

// True iff f(n)/log(n) -> infinity, decided analytically per kind.
inline bool is_superlog(const GrowthFunction& f) {
    switch (f.kind()) {
        case GrowthFunction::Kind::PowerOfLog: return f.exponent() > 1.0;
        case GrowthFunction::Kind::Polynomial: return f.exponent() > 0.0;
        case GrowthFunction::Kind::Logarithmic: return false;
        case GrowthFunction::Kind::Constant: return false;
    }
    return false;
}

// n * q*^f(n), the vanishing term that squeezes the bound against 1:
// 1 - n*q*^f(n) <= (1 - q*^f(n))^n <= 1. Evaluated as
// exp(log n + f(n) log q*). q_star must lie strictly in (0,1).
inline double asymptotic_term(std::uint64_t n, const GrowthFunction& f, double q_star) {
    if (n == 0) throw std::invalid_argument("asymptotic_term: n must be >= 1");
    if (!(q_star > 0.0 && q_star < 1.0))
        throw std::domain_error("asymptotic_term: q_star must lie strictly in (0,1)");
    const auto k = growth_eval(f, n);
    return std::exp(std::log(static_cast<double>(n)) + static_cast<double>(k) * std::log(q_star));
}

// Accepts "plog:C", "poly:C", "log", "const:V".
inline GrowthFunction parse_growth(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (head == "plog") return GrowthFunction::power_of_log(std::stod(arg));
        if (head == "poly") return GrowthFunction::polynomial(std::stod(arg));
        if (head == "log" && arg.empty()) return GrowthFunction::logarithmic();
        if (head == "const") return GrowthFunction::constant(std::stoull(arg));
    } catch (const std::logic_error&) {
        // fall through to the uniform error below
    }
    throw std::invalid_argument("parse_growth: expected plog:C, poly:C, log, or const:V, got '" + text + "'");
}

}  // namespace rowloss
