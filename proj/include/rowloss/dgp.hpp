#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "matrix.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace rowloss {

// Every cell observed independently with probability q (q parameterizes
// P(M = 0), observation, not missingness).
struct IidMechanism {
    double q = 0.0;
};

// Conditional observation probabilities q_ij <= q_star along the all-observed
// prefix of each row. q holds either k entries (the same conditionals for
// every row) or a full row-major n*k table. Cells after the first missing
// cell in a row are drawn i.i.d. with the same marginal q_ij; only the
// all-observed prefix path is constrained, so any completion is admissible
// and this one keeps each cell an independent Bernoulli(q_ij).
struct SequentialMechanism {
    double q_star = 0.0;
    std::vector<double> q;
};

struct DgpSpec {
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::variant<IidMechanism, SequentialMechanism> mechanism;
    std::uint64_t seed = 0;

    void validate() const {
        if (n == 0 || k == 0) throw std::invalid_argument("DgpSpec: n and k must be >= 1");
        if (const auto* iid = std::get_if<IidMechanism>(&mechanism)) {
            if (!(iid->q >= 0.0 && iid->q < 1.0))
                throw std::invalid_argument("DgpSpec: iid q must lie in [0,1)");
        } else {
            const auto& seq = std::get<SequentialMechanism>(mechanism);
            if (!(seq.q_star >= 0.0 && seq.q_star < 1.0))
                throw std::invalid_argument("DgpSpec: q_star must lie in [0,1)");
            if (seq.q.size() != k && seq.q.size() != n * k)
                throw std::invalid_argument("DgpSpec: sequential table must hold k or n*k probabilities");
            for (double qij : seq.q)
                if (!(qij >= 0.0 && qij <= seq.q_star))
                    throw std::invalid_argument("DgpSpec: every q_ij must lie in [0, q_star]");
        }
    }

    double observe_prob(std::uint64_t row, std::uint64_t col) const {
        if (const auto* iid = std::get_if<IidMechanism>(&mechanism)) return iid->q;
        const auto& seq = std::get<SequentialMechanism>(mechanism);
        return seq.q.size() == k ? seq.q[col] : seq.q[row * k + col];
    }
};

struct PAllEstimate {
    double estimate = 0.0;
    std::uint64_t replicates = 0;
    double std_error = 0.0;  // sqrt(estimate*(1-estimate)/replicates)
};

// Row i of replicate r draws its cells, in column order, from the stream
// derived from (seed, r, i). Everything downstream (estimate_p_all, any
// parallel split) sees the same cells because the stream depends only on
// those indices.
inline MissingnessMatrix generate_replicate(const DgpSpec& spec, std::uint64_t replicate) {
    spec.validate();
    MissingnessMatrixBuilder b(spec.n, spec.k);
    for (std::uint64_t i = 0; i < spec.n; ++i) {
        SplitMix64 stream = derive_stream(spec.seed, replicate, i);
        for (std::uint64_t j = 0; j < spec.k; ++j) {
            const bool observed = stream.next_unit() < spec.observe_prob(i, j);
            if (!observed) b.set_missing(i, j);
        }
    }
    return b.build();
}

inline MissingnessMatrix generate(const DgpSpec& spec) { return generate_replicate(spec, 0); }

namespace detail {

// True iff no row of replicate r is fully observed. Stops a row at its first
// missing cell and the replicate at its first surviving row; that changes
// which draws are consumed but not their values, so the verdict is identical
// to running complete_row_mask over generate_replicate.
inline bool all_rows_lost(const DgpSpec& spec, std::uint64_t replicate) {
    for (std::uint64_t i = 0; i < spec.n; ++i) {
        SplitMix64 stream = derive_stream(spec.seed, replicate, i);
        bool row_complete = true;
        for (std::uint64_t j = 0; j < spec.k; ++j) {
            if (!(stream.next_unit() < spec.observe_prob(i, j))) {
                row_complete = false;
                break;
            }
        }
        if (row_complete) return false;
    }
    return true;
}

}  // namespace detail

// Fraction of replicates in which listwise deletion removes every row.
// Deterministic for a given (spec.seed, replicates) at any thread count:
// replicate verdicts are pure functions of (seed, r) and the reduction is an
// integer sum.
inline PAllEstimate estimate_p_all(const DgpSpec& spec, std::uint64_t replicates, unsigned threads = 1) {
    spec.validate();
    if (replicates == 0) throw std::invalid_argument("estimate_p_all: replicates must be >= 1");

    std::vector<std::uint64_t> lost_per_chunk(resolve_threads(threads), 0);
    for_each_chunk(replicates, threads, [&](unsigned chunk, std::uint64_t begin, std::uint64_t end) {
        std::uint64_t lost = 0;
        for (std::uint64_t r = begin; r < end; ++r)
            if (detail::all_rows_lost(spec, r)) ++lost;
        lost_per_chunk[chunk] = lost;
    });

    std::uint64_t lost = 0;
    for (auto c : lost_per_chunk) lost += c;

    PAllEstimate est;
    est.replicates = replicates;
    est.estimate = static_cast<double>(lost) / static_cast<double>(replicates);
    est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(replicates));
    return est;
}

}  // namespace rowloss
