#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "report.hpp"
#include "subsample.hpp"

namespace rowloss {

// Shortest round-trip decimal form; identical input bits give identical text,
// which is what keeps rerun CSVs byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Column orders below are fixed and documented in the README; tests and the
// schema rely on them.

inline void write_survival_csv(std::ostream& out, const SubsampleResult& result) {
    out << "k,mean_surviving_prop,mean_surviving_prop_se,prob_all_rows_lost,prob_all_rows_lost_se,replicates\n";
    for (const auto& s : result.per_k) {
        out << s.k << ',' << format_double(s.mean_surviving_prop) << ','
            << format_double(s.mean_surviving_prop_se) << ',' << format_double(s.prob_all_rows_lost)
            << ',' << format_double(s.prob_all_rows_lost_se) << ',' << s.replicates << '\n';
    }
}

inline void write_bound_vs_k_csv(std::ostream& out, const std::vector<BoundGridRow>& rows) {
    out << "q_star,n,k,p_all_lower_bound,one_minus_bound\n";
    for (const auto& r : rows) {
        out << format_double(r.q_star) << ',' << r.n << ',' << r.k << ',' << format_double(r.bound)
            << ',' << format_double(r.complement) << '\n';
    }
}

struct MaxKRow {
    double q_star = 0.0;
    double target = 0.0;
    std::uint64_t n = 0;
    std::uint64_t max_k = 0;
};

inline void write_max_k_csv(std::ostream& out, const std::vector<MaxKRow>& rows) {
    out << "q_star,target,n,max_k\n";
    for (const auto& r : rows) {
        out << format_double(r.q_star) << ',' << format_double(r.target) << ',' << r.n << ','
            << r.max_k << '\n';
    }
}

struct ExpectedMissingRow {
    double q_star = 0.0;
    std::uint64_t k = 0;
    double bound = 0.0;
};

inline void write_expected_missing_csv(std::ostream& out, const std::vector<ExpectedMissingRow>& rows) {
    out << "q_star,k,expected_missing_prop_bound\n";
    for (const auto& r : rows)
        out << format_double(r.q_star) << ',' << r.k << ',' << format_double(r.bound) << '\n';
}

struct GrowthDiagRow {
    std::string growth;
    bool superlog = false;
    double q_star = 0.0;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double term = 0.0;  // n * q_star^k
    double bound = 0.0;
    double complement = 0.0;
};

inline void write_growth_diag_csv(std::ostream& out, const std::vector<GrowthDiagRow>& rows) {
    out << "growth,superlog,q_star,n,k,n_times_q_star_pow_k,p_all_lower_bound,one_minus_bound\n";
    for (const auto& r : rows) {
        out << r.growth << ',' << (r.superlog ? "true" : "false") << ',' << format_double(r.q_star)
            << ',' << r.n << ',' << r.k << ',' << format_double(r.term) << ','
            << format_double(r.bound) << ',' << format_double(r.complement) << '\n';
    }
}

}  // namespace rowloss
