#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "groups.hpp"
#include "matrix.hpp"
#include "subsample.hpp"
#include "version.hpp"

namespace rowloss {

using ordered_json = nlohmann::ordered_json;

// Everything needed to rerun the command that produced a report. Thread
// count is deliberately absent: results are worker-independent, so it is not
// part of the statistical configuration.
struct Provenance {
    std::string input;
    std::string command;
    ordered_json config = ordered_json::object();
    std::uint64_t seed = 0;
};

struct BoundGridRow {
    double q_star = 0.0;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    double bound = 0.0;
    double complement = 0.0;
};

inline ordered_json profile_json(const DatasetProfile& p) {
    return ordered_json{{"n_rows", p.n_rows},
                        {"n_cols", p.n_cols},
                        {"avg_missing_prop", p.avg_missing_prop},
                        {"max_missing_prop", p.max_missing_prop},
                        {"n_fully_observed_cols", p.n_fully_observed_cols},
                        {"n_complete_rows", p.n_complete_rows},
                        {"per_col_missing_prop", p.per_col_missing_prop}};
}

inline ordered_json groups_json(const GroupPartition& part) {
    return ordered_json{{"n_groups", part.n_groups}, {"group_sizes", group_sizes(part)}};
}

inline ordered_json subsample_json(const SubsampleResult& result) {
    ordered_json per_k = ordered_json::array();
    for (const auto& s : result.per_k) {
        per_k.push_back(ordered_json{{"k", s.k},
                                     {"mean_surviving_prop", s.mean_surviving_prop},
                                     {"mean_surviving_prop_se", s.mean_surviving_prop_se},
                                     {"prob_all_rows_lost", s.prob_all_rows_lost},
                                     {"prob_all_rows_lost_se", s.prob_all_rows_lost_se},
                                     {"replicates", s.replicates}});
    }
    return ordered_json{{"per_k", per_k}};
}

inline ordered_json bounds_json(const std::vector<BoundGridRow>& grid) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : grid) {
        rows.push_back(ordered_json{{"q_star", r.q_star},
                                    {"n", r.n},
                                    {"k", r.k},
                                    {"p_all_lower_bound", r.bound},
                                    {"one_minus_bound", r.complement}});
    }
    return rows;
}

inline ordered_json provenance_json(const Provenance& p) {
    return ordered_json{{"input", p.input},
                        {"command", p.command},
                        {"config", p.config},
                        {"seed", p.seed},
                        {"version", version}};
}

inline ordered_json make_report(const DatasetProfile& profile, const GroupPartition& groups,
                                const SubsampleResult* subsample,
                                const std::vector<BoundGridRow>* bound_grid,
                                const Provenance& provenance) {
    ordered_json report{{"profile", profile_json(profile)}, {"groups", groups_json(groups)}};
    if (subsample) report["subsample"] = subsample_json(*subsample);
    if (bound_grid) report["bounds"] = bounds_json(*bound_grid);
    report["provenance"] = provenance_json(provenance);
    return report;
}

inline std::string dump_report(const ordered_json& report) { return report.dump(2) + "\n"; }

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace rowloss
