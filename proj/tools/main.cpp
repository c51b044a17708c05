#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "rowloss/bounds.hpp"
#include "rowloss/groups.hpp"
#include "rowloss/ingest.hpp"
#include "rowloss/matrix.hpp"
#include "rowloss/report.hpp"
#include "rowloss/series.hpp"
#include "rowloss/subsample.hpp"
#include "rowloss/svg.hpp"
#include "rowloss/version.hpp"

namespace fs = std::filesystem;
using rowloss::ordered_json;

namespace {

const char* const palette[] = {"#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d35400", "#16a085"};

struct IngestFlags {
    std::string delimiter = ",";
    std::vector<std::string> missing_tokens;
    std::vector<std::string> drop_cols;
    bool drop_fully_missing = false;
    bool no_header = false;

    rowloss::IngestConfig to_config() const {
        rowloss::IngestConfig cfg;
        if (delimiter == "\\t" || delimiter == "tab")
            cfg.delimiter = '\t';
        else if (delimiter.size() == 1)
            cfg.delimiter = delimiter[0];
        else
            throw std::invalid_argument("--delimiter must be a single character (or 'tab')");
        if (!missing_tokens.empty()) cfg.missing_tokens = missing_tokens;
        cfg.drop_columns = drop_cols;
        cfg.drop_fully_missing = drop_fully_missing;
        cfg.has_header = !no_header;
        return cfg;
    }

    ordered_json to_json() const {
        const auto cfg = to_config();
        return ordered_json{{"delimiter", std::string(1, cfg.delimiter)},
                            {"missing_tokens", cfg.missing_tokens},
                            {"drop_columns", cfg.drop_columns},
                            {"drop_fully_missing", cfg.drop_fully_missing},
                            {"has_header", cfg.has_header}};
    }
};

void add_ingest_flags(CLI::App* cmd, IngestFlags& flags) {
    cmd->add_option("--delimiter", flags.delimiter, "Field delimiter (single character or 'tab')");
    cmd->add_option("--missing-token", flags.missing_tokens,
                    "Token treated as missing; repeatable, replaces the default {\"\", \"NA\"}");
    cmd->add_option("--drop-col", flags.drop_cols,
                    "Glob pattern of column names to drop; repeatable");
    cmd->add_flag("--drop-fully-missing", flags.drop_fully_missing,
                  "Drop columns that are 100% missing");
    cmd->add_flag("--no-header", flags.no_header, "First row is data, name columns c1..cK");
}

fs::path resolve_out_dir(const std::string& flag_value) {
    fs::path dir;
    if (!flag_value.empty()) {
        dir = flag_value;
    } else if (const char* env = std::getenv("ROWLOSS_OUT_DIR"); env && *env) {
        dir = env;
    } else {
        dir = ".";
    }
    fs::create_directories(dir);
    return dir;
}

void note_ingest(const rowloss::IngestReport& report) {
    if (!report.dropped_by_pattern.empty())
        std::cerr << "dropped " << report.dropped_by_pattern.size() << " column(s) by pattern\n";
    if (!report.dropped_fully_missing.empty())
        std::cerr << "dropped " << report.dropped_fully_missing.size()
                  << " fully missing column(s)\n";
    if (!report.renamed.empty())
        std::cerr << "de-duplicated " << report.renamed.size() << " column name(s)\n";
}

std::vector<std::uint64_t> log_sweep(std::uint64_t hi) {
    std::vector<std::uint64_t> out;
    if (hi <= 10) {
        out.push_back(hi);
        return out;
    }
    const double top = std::log10(static_cast<double>(hi));
    for (double e = 1.0; e < top; e += 0.25) {
        const auto v = static_cast<std::uint64_t>(std::llround(std::pow(10.0, e)));
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    if (out.empty() || out.back() != hi) out.push_back(hi);
    return out;
}

std::string version_tag() { return std::string("rowloss ") + rowloss::version; }

int run_profile(const std::string& input, const IngestFlags& flags, const std::string& out_flag) {
    const fs::path out_dir = resolve_out_dir(out_flag);
    auto result = rowloss::ingest(input, flags.to_config());
    note_ingest(result.report);

    const auto prof = rowloss::profile(result.matrix);
    const auto groups = rowloss::detect_groups(result.matrix);

    rowloss::Provenance prov;
    prov.input = input;
    prov.command = "profile";
    prov.config = ordered_json{{"ingest", flags.to_json()}};
    const auto report = rowloss::make_report(prof, groups, nullptr, nullptr, prov);
    rowloss::write_text_file(out_dir / "report.json", rowloss::dump_report(report));

    std::cerr << "profile: " << prof.n_rows << " rows, " << prof.n_cols << " cols, avg missing "
              << prof.avg_missing_prop << ", complete rows " << prof.n_complete_rows << ", groups "
              << groups.n_groups << "\n";
    std::cerr << "wrote " << (out_dir / "report.json").string() << "\n";
    return 0;
}

int run_simulate(const std::string& input, const IngestFlags& flags,
                 const std::vector<std::size_t>& k_list, std::size_t k_max,
                 std::uint64_t replicates, std::uint64_t seed, unsigned threads, bool exact,
                 const std::vector<double>& q_stars, bool svg, const std::string& out_flag) {
    const fs::path out_dir = resolve_out_dir(out_flag);
    auto ingested = rowloss::ingest(input, flags.to_config());
    note_ingest(ingested.report);
    const auto& m = ingested.matrix;

    std::vector<std::size_t> grid = k_list;
    if (grid.empty())
        for (std::size_t k = 1; k <= std::min(k_max, m.n_cols()); ++k) grid.push_back(k);

    rowloss::SubsampleResult sim;
    if (exact) {
        for (std::size_t k : grid) {
            const auto ex = rowloss::enumerate_exact(m, k);
            rowloss::KSurvivalStats s;
            s.k = k;
            s.mean_surviving_prop = ex.mean_surviving_prop;
            s.prob_all_rows_lost = ex.prob_all_rows_lost;
            s.replicates = ex.n_subsets;  // all subsets visited, SEs are exactly 0
            sim.per_k.push_back(s);
        }
    } else {
        rowloss::SubsampleConfig cfg;
        cfg.k_values = grid;
        cfg.replicates = replicates;
        cfg.seed = seed;
        sim = rowloss::run_subsample(m, cfg, threads);
    }

    std::optional<std::vector<rowloss::BoundGridRow>> bound_grid;
    if (!q_stars.empty()) {
        bound_grid.emplace();
        for (double q : q_stars) {
            for (std::size_t k : grid) {
                rowloss::BoundGridRow row;
                row.q_star = q;
                row.n = m.n_rows();
                row.k = k;
                row.bound = rowloss::p_all_lower_bound(m.n_rows(), k, q);
                row.complement = rowloss::p_all_lower_bound_complement(m.n_rows(), k, q);
                bound_grid->push_back(row);
            }
        }
    }

    const auto prof = rowloss::profile(m);
    const auto groups = rowloss::detect_groups(m);
    rowloss::Provenance prov;
    prov.input = input;
    prov.command = "simulate";
    prov.seed = seed;
    prov.config = ordered_json{{"ingest", flags.to_json()},
                               {"k_values", grid},
                               {"replicates", replicates},
                               {"exact", exact},
                               {"q_star", q_stars}};
    const auto report = rowloss::make_report(prof, groups, &sim,
                                             bound_grid ? &*bound_grid : nullptr, prov);
    rowloss::write_text_file(out_dir / "report.json", rowloss::dump_report(report));

    std::ostringstream csv;
    rowloss::write_survival_csv(csv, sim);
    rowloss::write_text_file(out_dir / "survival_vs_k.csv", csv.str());

    if (svg) {
        rowloss::SvgPanel left{"Data remaining after listwise deletion", "variables selected (k)",
                               "expected proportion remaining"};
        rowloss::SvgPanel right{"All rows lost", "variables selected (k)", "P(all rows lost)"};
        rowloss::SvgSeries mean_series{"mean surviving", palette[1], {}, {}};
        rowloss::SvgSeries prob_series{"P(all lost)", palette[0], {}, {}};
        for (const auto& s : sim.per_k) {
            mean_series.x.push_back(static_cast<double>(s.k));
            mean_series.y.push_back(s.mean_surviving_prop);
            prob_series.x.push_back(static_cast<double>(s.k));
            prob_series.y.push_back(s.prob_all_rows_lost);
        }
        left.series.push_back(mean_series);
        right.series.push_back(prob_series);
        rowloss::write_text_file(out_dir / "survival.svg",
                                 rowloss::render_svg_figure({left, right}, version_tag()));
    }

    std::cerr << "simulate: " << grid.size() << " k value(s), "
              << (exact ? "exact enumeration" : std::to_string(replicates) + " replicates")
              << "\n";
    std::cerr << "wrote " << (out_dir / "report.json").string() << ", "
              << (out_dir / "survival_vs_k.csv").string() << (svg ? ", survival.svg" : "") << "\n";
    return 0;
}

int run_bounds(std::uint64_t n, std::vector<double> q_stars, const std::vector<std::size_t>& k_list,
               std::size_t k_max, std::vector<double> targets,
               const std::string& growth_spec, bool svg, const std::string& out_flag) {
    const fs::path out_dir = resolve_out_dir(out_flag);
    if (n == 0) throw std::invalid_argument("--n must be >= 1");
    if (q_stars.empty()) q_stars = {0.75, 0.90, 0.99};
    if (targets.empty()) targets = {0.5, 0.99};
    for (double q : q_stars)
        if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("--q-star must lie in [0,1)");

    std::vector<std::size_t> grid = k_list;
    if (grid.empty())
        for (std::size_t k = 1; k <= k_max; ++k) grid.push_back(k);

    // bound vs k at fixed n
    std::vector<rowloss::BoundGridRow> bound_rows;
    for (double q : q_stars) {
        for (std::size_t k : grid) {
            rowloss::BoundGridRow row;
            row.q_star = q;
            row.n = n;
            row.k = k;
            row.bound = rowloss::p_all_lower_bound(n, k, q);
            row.complement = rowloss::p_all_lower_bound_complement(n, k, q);
            bound_rows.push_back(row);
        }
    }
    std::ostringstream bound_csv;
    rowloss::write_bound_vs_k_csv(bound_csv, bound_rows);
    rowloss::write_text_file(out_dir / "bound_vs_k.csv", bound_csv.str());

    // largest admissible k against n, per q* and target
    std::vector<rowloss::MaxKRow> maxk_rows;
    const auto n_sweep = log_sweep(n);
    for (double q : q_stars) {
        if (q == 0.0) continue;  // inversion is singular at q* = 0
        for (double target : targets) {
            for (std::uint64_t nn : n_sweep) {
                rowloss::MaxKRow row;
                row.q_star = q;
                row.target = target;
                row.n = nn;
                row.max_k = rowloss::max_k_for_target(nn, q, target);
                maxk_rows.push_back(row);
            }
        }
    }
    std::ostringstream maxk_csv;
    rowloss::write_max_k_csv(maxk_csv, maxk_rows);
    rowloss::write_text_file(out_dir / "max_k_vs_n.csv", maxk_csv.str());

    // expected missing proportion bound, independent of n
    std::vector<rowloss::ExpectedMissingRow> exp_rows;
    for (double q : q_stars)
        for (std::size_t k : grid)
            exp_rows.push_back({q, k, rowloss::expected_missing_prop_bound(k, q)});
    std::ostringstream exp_csv;
    rowloss::write_expected_missing_csv(exp_csv, exp_rows);
    rowloss::write_text_file(out_dir / "expected_missing_vs_k.csv", exp_csv.str());

    // convergence diagnostic along k = f(n)
    if (!growth_spec.empty()) {
        const auto f = rowloss::parse_growth(growth_spec);
        std::vector<rowloss::GrowthDiagRow> diag_rows;
        for (double q : q_stars) {
            if (q == 0.0) continue;
            for (std::uint64_t nn : n_sweep) {
                rowloss::GrowthDiagRow row;
                row.growth = f.label();
                row.superlog = rowloss::is_superlog(f);
                row.q_star = q;
                row.n = nn;
                row.k = rowloss::growth_eval(f, nn);
                row.term = rowloss::asymptotic_term(nn, f, q);
                row.bound = rowloss::p_all_lower_bound(nn, row.k, q);
                row.complement = rowloss::p_all_lower_bound_complement(nn, row.k, q);
                diag_rows.push_back(row);
            }
        }
        std::ostringstream diag_csv;
        rowloss::write_growth_diag_csv(diag_csv, diag_rows);
        rowloss::write_text_file(out_dir / "growth_diag.csv", diag_csv.str());
    }

    if (svg) {
        rowloss::SvgPanel left{"Lower bound on P(all rows lost), n=" + std::to_string(n),
                               "variables (k)", "bound"};
        rowloss::SvgPanel right{"Expected proportion missing (any n)", "variables (k)", "bound"};
        for (std::size_t qi = 0; qi < q_stars.size(); ++qi) {
            char label[32];
            std::snprintf(label, sizeof label, "q*=%g", q_stars[qi]);
            rowloss::SvgSeries bound_series{label, palette[qi % 6], {}, {}};
            rowloss::SvgSeries exp_series{label, palette[qi % 6], {}, {}};
            for (std::size_t k : grid) {
                bound_series.x.push_back(static_cast<double>(k));
                bound_series.y.push_back(rowloss::p_all_lower_bound(n, k, q_stars[qi]));
                exp_series.x.push_back(static_cast<double>(k));
                exp_series.y.push_back(rowloss::expected_missing_prop_bound(k, q_stars[qi]));
            }
            left.series.push_back(bound_series);
            right.series.push_back(exp_series);
        }
        rowloss::write_text_file(out_dir / "bounds.svg",
                                 rowloss::render_svg_figure({left, right}, version_tag()));
    }

    std::cerr << "bounds: wrote " << (out_dir / "bound_vs_k.csv").string() << ", max_k_vs_n.csv, "
              << "expected_missing_vs_k.csv" << (growth_spec.empty() ? "" : ", growth_diag.csv")
              << (svg ? ", bounds.svg" : "") << "\n";
    return 0;
}

int run_mask_export(const std::string& input, const IngestFlags& flags,
                    const std::string& out_flag) {
    const fs::path out_dir = resolve_out_dir(out_flag);
    auto result = rowloss::ingest(input, flags.to_config());
    note_ingest(result.report);
    rowloss::write_mask_file(out_dir / "missingness.mask", result.matrix);
    std::cerr << "wrote " << (out_dir / "missingness.mask").string() << " (" << result.matrix.n_rows()
              << "x" << result.matrix.n_cols() << ")\n";
    return 0;
}

int run_mask_import(const std::string& input, const std::string& out_flag) {
    const fs::path out_dir = resolve_out_dir(out_flag);
    const auto m = rowloss::read_mask_file(input);
    const auto prof = rowloss::profile(m);
    const auto groups = rowloss::detect_groups(m);

    rowloss::Provenance prov;
    prov.input = input;
    prov.command = "mask import";
    const auto report = rowloss::make_report(prof, groups, nullptr, nullptr, prov);
    rowloss::write_text_file(out_dir / "report.json", rowloss::dump_report(report));
    std::cerr << "mask import: " << prof.n_rows << " rows, " << prof.n_cols << " cols; wrote "
              << (out_dir / "report.json").string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rowloss: missingness profiling and listwise-deletion loss prediction"};
    app.set_version_flag("--version", version_tag());
    app.require_subcommand(1);

    int rc = 0;

    // profile
    auto* profile_cmd = app.add_subcommand("profile", "Summarize missingness in a delimited file");
    static std::string profile_input, profile_out;
    static IngestFlags profile_flags;
    profile_cmd->add_option("input", profile_input, "Delimited text file")->required();
    add_ingest_flags(profile_cmd, profile_flags);
    profile_cmd->add_option("--out", profile_out, "Output directory (default: $ROWLOSS_OUT_DIR or .)");
    profile_cmd->callback([&] { rc = run_profile(profile_input, profile_flags, profile_out); });

    // simulate
    auto* sim_cmd = app.add_subcommand(
        "simulate", "Variable-subsampling experiment: survival under listwise deletion per k");
    static std::string sim_input, sim_out;
    static IngestFlags sim_flags;
    static std::vector<std::size_t> sim_k;
    static std::size_t sim_k_max = 100;
    static std::uint64_t sim_replicates = 25000;
    static std::uint64_t sim_seed = 1;
    static unsigned sim_threads = 1;
    static bool sim_exact = false;
    static bool sim_svg = false;
    static std::vector<double> sim_qstars;
    sim_cmd->add_option("input", sim_input, "Delimited text file")->required();
    add_ingest_flags(sim_cmd, sim_flags);
    sim_cmd->add_option("--k", sim_k, "Explicit k grid; repeatable (default: 1..min(k-max, n_cols))");
    sim_cmd->add_option("--k-max", sim_k_max, "Upper end of the default k grid");
    sim_cmd->add_option("--replicates", sim_replicates, "Subsampling draws per k");
    sim_cmd->add_option("--seed", sim_seed, "RNG seed");
    sim_cmd->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");
    sim_cmd->add_flag("--exact", sim_exact,
                      "Enumerate all subsets instead of sampling (refused when infeasible)");
    sim_cmd->add_option("--q-star", sim_qstars,
                        "Attach the analytic bound grid at these q* values; repeatable");
    sim_cmd->add_flag("--svg", sim_svg, "Also emit survival.svg");
    sim_cmd->add_option("--out", sim_out, "Output directory (default: $ROWLOSS_OUT_DIR or .)");
    sim_cmd->callback([&] {
        rc = run_simulate(sim_input, sim_flags, sim_k, sim_k_max, sim_replicates, sim_seed,
                          sim_threads, sim_exact, sim_qstars, sim_svg, sim_out);
    });

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "Closed-form bound series and diagnostics");
    static std::uint64_t bounds_n = 10000;
    static std::vector<double> bounds_q;
    static std::vector<std::size_t> bounds_k;
    static std::size_t bounds_k_max = 150;
    static std::vector<double> bounds_targets;
    static std::string bounds_growth, bounds_out;
    static bool bounds_svg = false;
    bounds_cmd->add_option("--n", bounds_n, "Row count (also the top of the n sweep)");
    bounds_cmd->add_option("--q-star", bounds_q, "q* values; repeatable (default 0.75 0.9 0.99)");
    bounds_cmd->add_option("--k", bounds_k, "Explicit k grid; repeatable");
    bounds_cmd->add_option("--k-max", bounds_k_max, "Upper end of the default k grid (1..k-max)");
    bounds_cmd->add_option("--target", bounds_targets,
                           "p_all targets for the max-k inversion; repeatable (default 0.5 0.99)");
    bounds_cmd->add_option("--growth", bounds_growth,
                           "Growth spec plog:C | poly:C | log | const:V for the convergence diagnostic");
    bounds_cmd->add_flag("--svg", bounds_svg, "Also emit bounds.svg");
    bounds_cmd->add_option("--out", bounds_out, "Output directory (default: $ROWLOSS_OUT_DIR or .)");
    bounds_cmd->callback([&] {
        rc = run_bounds(bounds_n, bounds_q, bounds_k, bounds_k_max, bounds_targets, bounds_growth,
                        bounds_svg, bounds_out);
    });

    // mask export / import
    auto* mask_cmd = app.add_subcommand("mask", "Missingness mask sidecar files");
    mask_cmd->require_subcommand(1);
    auto* export_cmd = mask_cmd->add_subcommand("export", "Ingest a delimited file, write its mask");
    static std::string export_input, export_out;
    static IngestFlags export_flags;
    export_cmd->add_option("input", export_input, "Delimited text file")->required();
    add_ingest_flags(export_cmd, export_flags);
    export_cmd->add_option("--out", export_out, "Output directory (default: $ROWLOSS_OUT_DIR or .)");
    export_cmd->callback([&] { rc = run_mask_export(export_input, export_flags, export_out); });

    auto* import_cmd = mask_cmd->add_subcommand("import", "Read a mask file, write its profile report");
    static std::string import_input, import_out;
    import_cmd->add_option("input", import_input, "Mask sidecar file")->required();
    import_cmd->add_option("--out", import_out, "Output directory (default: $ROWLOSS_OUT_DIR or .)");
    import_cmd->callback([&] { rc = run_mask_import(import_input, import_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // 0 covers --help/--version
    } catch (const rowloss::enumeration_guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
