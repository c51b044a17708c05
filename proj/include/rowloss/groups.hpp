#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "bounds.hpp"
#include "matrix.hpp"

namespace rowloss {

// Partition of columns into maximal sets sharing an identical missingness
// pattern across all rows. Group ids follow first occurrence in column order.
struct GroupPartition {
    std::size_t n_groups = 0;
    std::vector<std::size_t> assignments;      // column index -> group id
    std::vector<std::size_t> representatives;  // first column of each group
};

namespace detail {

struct PatternHash {
    std::size_t operator()(std::span<const std::uint64_t> words) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t w : words) {
            h ^= w;
            h *= 0x100000001b3ULL;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

struct PatternEq {
    bool operator()(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) const {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return false;
        return true;
    }
};

}  // namespace detail

// Exact bit-column equality via hashing of the packed patterns; the map's
// equality check settles hash collisions.
inline GroupPartition detect_groups(const MissingnessMatrix& m) {
    const ColumnPatterns cols = column_missing_patterns(m);
    GroupPartition part;
    part.assignments.resize(m.n_cols());

    std::unordered_map<std::span<const std::uint64_t>, std::size_t, detail::PatternHash,
                       detail::PatternEq>
        first_seen;
    first_seen.reserve(m.n_cols());
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
        auto [it, inserted] = first_seen.try_emplace(cols.col(j), part.representatives.size());
        if (inserted) part.representatives.push_back(j);
        part.assignments[j] = it->second;
    }
    part.n_groups = part.representatives.size();
    return part;
}

// (1 - q*^g)^n with the group count g in place of k; the same closed form,
// so it delegates outright.
inline double group_p_all_lower_bound(std::uint64_t n, std::uint64_t g, double q_star) {
    return p_all_lower_bound(n, g, q_star);
}

inline std::vector<std::size_t> group_sizes(const GroupPartition& part) {
    std::vector<std::size_t> sizes(part.n_groups, 0);
    for (std::size_t gid : part.assignments) ++sizes[gid];
    return sizes;
}

}  // namespace rowloss
