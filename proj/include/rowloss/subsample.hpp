#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrix.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace rowloss {

// Thrown when enumerate_exact is asked for more subsets than its guard allows.
class enumeration_guard_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SubsampleConfig {
    std::vector<std::size_t> k_values;
    std::uint64_t replicates = 25000;
    std::uint64_t seed = 0;
    std::vector<std::size_t> eligible_cols;  // empty means all columns
};

struct KSurvivalStats {
    std::size_t k = 0;
    double mean_surviving_prop = 0.0;
    double mean_surviving_prop_se = 0.0;  // sample SD of per-draw proportions / sqrt(R)
    double prob_all_rows_lost = 0.0;
    double prob_all_rows_lost_se = 0.0;  // binomial SE
    std::uint64_t replicates = 0;
};

struct SubsampleResult {
    std::vector<KSurvivalStats> per_k;
};

struct ExactSurvival {
    double mean_surviving_prop = 0.0;
    double prob_all_rows_lost = 0.0;
    std::uint64_t n_subsets = 0;
};

namespace detail {

// Column-major OBSERVED bitmaps: the rows surviving deletion on a column set
// are the AND of the set's bitmaps. Padding rows are zero so popcounts carry
// no stray bits.
struct ObservedColumns {
    std::size_t n_rows = 0;
    std::size_t words_per_col = 0;
    std::vector<std::uint64_t> words;

    explicit ObservedColumns(const MissingnessMatrix& m) {
        const ColumnPatterns missing = column_missing_patterns(m);
        n_rows = m.n_rows();
        words_per_col = missing.words_per_col;
        words.assign(missing.words.size(), 0);
        const std::uint64_t pad =
            (n_rows & 63) ? ~std::uint64_t{0} >> (64 - (n_rows & 63)) : ~std::uint64_t{0};
        for (std::size_t j = 0; j < m.n_cols(); ++j) {
            auto src = missing.col(j);
            for (std::size_t w = 0; w < words_per_col; ++w) {
                std::uint64_t inv = ~src[w];
                if (w + 1 == words_per_col) inv &= pad;
                words[j * words_per_col + w] = inv;
            }
        }
    }

    std::span<const std::uint64_t> col(std::size_t j) const {
        return {words.data() + j * words_per_col, words_per_col};
    }

    // Surviving row count on the given columns; bails out once the
    // accumulator is all-zero.
    std::size_t surviving(std::span<const std::size_t> cols, std::vector<std::uint64_t>& acc) const {
        acc.assign(col(cols[0]).begin(), col(cols[0]).end());
        for (std::size_t c = 1; c < cols.size(); ++c) {
            auto src = col(cols[c]);
            std::uint64_t any = 0;
            for (std::size_t w = 0; w < words_per_col; ++w) any |= (acc[w] &= src[w]);
            if (any == 0) return 0;
        }
        std::size_t alive = 0;
        for (auto w : acc) alive += static_cast<std::size_t>(std::popcount(w));
        return alive;
    }
};

inline std::vector<std::size_t> resolve_eligible(const MissingnessMatrix& m,
                                                 const SubsampleConfig& cfg) {
    std::vector<std::size_t> eligible = cfg.eligible_cols;
    if (eligible.empty()) {
        eligible.resize(m.n_cols());
        std::iota(eligible.begin(), eligible.end(), std::size_t{0});
    } else {
        std::vector<char> seen(m.n_cols(), 0);
        for (std::size_t col : eligible) {
            if (col >= m.n_cols())
                throw std::invalid_argument("SubsampleConfig: eligible column out of range");
            if (seen[col]++)
                throw std::invalid_argument("SubsampleConfig: duplicate eligible column");
        }
    }
    return eligible;
}

// C(n, k), capped: returns cap + 1 as soon as the count exceeds cap.
inline std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    __extension__ unsigned __int128 result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;  // exact: prefix products are binomials
        if (result > cap) return cap + 1;
    }
    return static_cast<std::uint64_t>(result);
}

}  // namespace detail

// The variable-subsampling experiment: for each k, draw `replicates` uniform
// k-subsets of the eligible columns (without replacement, partial
// Fisher-Yates), apply listwise deletion to each, and summarize survival.
// Replicate r of a given k draws from the stream (seed, k, r), so results are
// deterministic at any thread count and a k's estimates do not depend on
// which other k values are in the grid. All accumulation is in exact integer
// sums, which makes the reduction order irrelevant.
inline SubsampleResult run_subsample(const MissingnessMatrix& m, const SubsampleConfig& cfg,
                                     unsigned threads = 1) {
    const std::vector<std::size_t> eligible = detail::resolve_eligible(m, cfg);
    if (cfg.replicates == 0) throw std::invalid_argument("SubsampleConfig: replicates must be >= 1");
    if (cfg.k_values.empty()) throw std::invalid_argument("SubsampleConfig: k_values must be non-empty");
    for (std::size_t k : cfg.k_values)
        if (k == 0 || k > eligible.size())
            throw std::invalid_argument("SubsampleConfig: k = " + std::to_string(k) +
                                        " outside [1, " + std::to_string(eligible.size()) + "]");

    const detail::ObservedColumns observed(m);
    const double n_rows = static_cast<double>(m.n_rows());
    const std::uint64_t reps = cfg.replicates;

    SubsampleResult result;
    result.per_k.reserve(cfg.k_values.size());

    for (std::size_t k : cfg.k_values) {
        struct Partial {
            std::uint64_t surv_sum = 0;
            std::uint64_t surv_sq_sum = 0;
            std::uint64_t all_lost = 0;
        };
        std::vector<Partial> partials(resolve_threads(threads));

        for_each_chunk(reps, threads, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
            Partial p;
            std::vector<std::size_t> pool;
            std::vector<std::uint64_t> acc(observed.words_per_col);
            for (std::uint64_t r = begin; r < end; ++r) {
                SplitMix64 stream = derive_stream(cfg.seed, static_cast<std::uint64_t>(k), r);
                pool = eligible;
                for (std::size_t i = 0; i < k; ++i) {
                    const std::size_t j =
                        i + static_cast<std::size_t>(stream.next_below(pool.size() - i));
                    std::swap(pool[i], pool[j]);
                }
                const std::size_t alive =
                    observed.surviving(std::span<const std::size_t>(pool.data(), k), acc);
                p.surv_sum += alive;
                p.surv_sq_sum += static_cast<std::uint64_t>(alive) * alive;
                if (alive == 0) ++p.all_lost;
            }
            partials[chunk] = p;
        });

        Partial total;
        for (const auto& p : partials) {
            total.surv_sum += p.surv_sum;
            total.surv_sq_sum += p.surv_sq_sum;
            total.all_lost += p.all_lost;
        }

        KSurvivalStats stats;
        stats.k = k;
        stats.replicates = reps;
        const double r = static_cast<double>(reps);
        const double mean_count = static_cast<double>(total.surv_sum) / r;
        stats.mean_surviving_prop = mean_count / n_rows;
        if (reps > 1) {
            const double mean_sq = static_cast<double>(total.surv_sq_sum) / r;
            double var_count = (mean_sq - mean_count * mean_count) * (r / (r - 1.0));
            if (var_count < 0.0) var_count = 0.0;  // rounding when all draws equal
            stats.mean_surviving_prop_se = std::sqrt(var_count / r) / n_rows;
        }
        stats.prob_all_rows_lost = static_cast<double>(total.all_lost) / r;
        stats.prob_all_rows_lost_se =
            std::sqrt(stats.prob_all_rows_lost * (1.0 - stats.prob_all_rows_lost) / r);
        result.per_k.push_back(stats);
    }
    return result;
}

// Exact survival statistics under uniform k-subset sampling over ALL columns
// of m, by full enumeration with integer accumulation. Refuses when
// C(n_cols, k) exceeds max_subsets. This is the oracle run_subsample is
// tested against; it shares no sampling code with it.
inline ExactSurvival enumerate_exact(const MissingnessMatrix& m, std::size_t k,
                                     std::uint64_t max_subsets = 1000000) {
    if (k == 0 || k > m.n_cols())
        throw std::invalid_argument("enumerate_exact: k outside [1, n_cols]");
    const std::uint64_t count = detail::binomial_capped(m.n_cols(), k, max_subsets);
    if (count > max_subsets)
        throw enumeration_guard_error("enumerate_exact: C(" + std::to_string(m.n_cols()) + "," +
                                      std::to_string(k) + ") exceeds the guard of " +
                                      std::to_string(max_subsets) + " subsets");

    const detail::ObservedColumns observed(m);
    std::vector<std::uint64_t> acc(observed.words_per_col);
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), std::size_t{0});

    std::uint64_t surv_sum = 0;
    std::uint64_t all_lost = 0;
    std::uint64_t visited = 0;
    while (true) {
        const std::size_t alive = observed.surviving(idx, acc);
        surv_sum += alive;
        if (alive == 0) ++all_lost;
        ++visited;

        // next lexicographic combination
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == m.n_cols() - k + (pos - 1)) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t i = pos; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }

    ExactSurvival exact;
    exact.n_subsets = visited;
    exact.mean_surviving_prop = static_cast<double>(surv_sum) /
                                (static_cast<double>(visited) * static_cast<double>(m.n_rows()));
    exact.prob_all_rows_lost = static_cast<double>(all_lost) / static_cast<double>(visited);
    return exact;
}

}  // namespace rowloss
