#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rowloss/matrix.hpp"
#include "rowloss/subsample.hpp"
#include "support/random_matrix.hpp"

using rowloss::enumerate_exact;
using rowloss::enumeration_guard_error;
using rowloss::MissingnessMatrix;
using rowloss::run_subsample;
using rowloss::SubsampleConfig;
using testsupport::random_matrix;

namespace {

SubsampleConfig cfg_for(std::vector<std::size_t> ks, std::uint64_t reps, std::uint64_t seed) {
    SubsampleConfig cfg;
    cfg.k_values = std::move(ks);
    cfg.replicates = reps;
    cfg.seed = seed;
    return cfg;
}

// 4x5 matrix with a staircase of missingness; rows 0 and 3 are complete
MissingnessMatrix crafted_4x5() {
    return rowloss::matrix_from_grid({
        {false, false, false, false, false},
        {true, false, false, true, false},
        {false, true, false, false, true},
        {false, false, false, false, false},
    });
}

}  // namespace

TEST_CASE("config validation") {
    const auto m = crafted_4x5();
    CHECK_THROWS_AS(run_subsample(m, cfg_for({}, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_subsample(m, cfg_for({0}, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_subsample(m, cfg_for({6}, 10, 1)), std::invalid_argument);
    CHECK_THROWS_AS(run_subsample(m, cfg_for({1}, 0, 1)), std::invalid_argument);

    auto bad_eligible = cfg_for({1}, 10, 1);
    bad_eligible.eligible_cols = {0, 0};
    CHECK_THROWS_AS(run_subsample(m, bad_eligible), std::invalid_argument);
    bad_eligible.eligible_cols = {7};
    CHECK_THROWS_AS(run_subsample(m, bad_eligible), std::invalid_argument);

    auto narrow = cfg_for({3}, 10, 1);
    narrow.eligible_cols = {0, 1};  // k = 3 exceeds the eligible pool
    CHECK_THROWS_AS(run_subsample(m, narrow), std::invalid_argument);
}

TEST_CASE("fully observed matrix survives every subsample") {
    const auto m = rowloss::matrix_from_grid(
        std::vector<std::vector<bool>>(5, std::vector<bool>(4, false)));
    const auto result = run_subsample(m, cfg_for({1, 2, 4}, 300, 3));
    for (const auto& s : result.per_k) {
        CHECK(s.mean_surviving_prop == 1.0);
        CHECK(s.mean_surviving_prop_se == 0.0);
        CHECK(s.prob_all_rows_lost == 0.0);
        CHECK(s.prob_all_rows_lost_se == 0.0);
    }
}

TEST_CASE("k = n_cols degenerates to direct listwise deletion") {
    const auto m = crafted_4x5();
    const double direct = static_cast<double>(rowloss::complete_row_mask(m).popcount()) / 4.0;
    const auto result = run_subsample(m, cfg_for({5}, 50, 11));
    REQUIRE(result.per_k.size() == 1);
    CHECK(result.per_k[0].mean_surviving_prop == direct);
    CHECK(result.per_k[0].mean_surviving_prop_se == 0.0);
    CHECK(result.per_k[0].prob_all_rows_lost == 0.0);  // two complete rows always survive
}

TEST_CASE("enumerate_exact hand enumerations") {
    // 2x2, missing only (0,0): subsets {c0} -> 1 of 2 rows, {c1} -> 2 of 2
    const auto m = rowloss::matrix_from_grid({{true, false}, {false, false}});
    const auto ex = enumerate_exact(m, 1);
    CHECK(ex.n_subsets == 2);
    CHECK(ex.mean_surviving_prop == 0.75);
    CHECK(ex.prob_all_rows_lost == 0.0);

    const auto lost = rowloss::matrix_from_grid({{true, true}});
    for (std::size_t k : {std::size_t{1}, std::size_t{2}}) {
        const auto e = enumerate_exact(lost, k);
        CHECK(e.mean_surviving_prop == 0.0);
        CHECK(e.prob_all_rows_lost == 1.0);
    }

    const auto full = rowloss::matrix_from_grid(
        std::vector<std::vector<bool>>(3, std::vector<bool>(4, false)));
    const auto f = enumerate_exact(full, 2);
    CHECK(f.mean_surviving_prop == 1.0);
    CHECK(f.prob_all_rows_lost == 0.0);
}

TEST_CASE("enumerate_exact refuses infeasible subset counts") {
    rowloss::MissingnessMatrixBuilder b(2, 30);
    const auto wide = b.build();
    CHECK_THROWS_AS(enumerate_exact(wide, 15), enumeration_guard_error);  // C(30,15) ~ 1.55e8
    CHECK_NOTHROW(enumerate_exact(wide, 2));
    CHECK_THROWS_AS(enumerate_exact(wide, 0), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_exact(wide, 31), std::invalid_argument);
}

TEST_CASE("Monte Carlo matches exhaustive enumeration on the crafted 4x5 matrix") {
    const auto m = crafted_4x5();
    const auto exact = enumerate_exact(m, 2);  // C(5,2) = 10 subsets
    CHECK(exact.n_subsets == 10);
    const auto mc = run_subsample(m, cfg_for({2}, 20000, 17));
    const auto& s = mc.per_k[0];
    CHECK(s.mean_surviving_prop ==
          Catch::Approx(exact.mean_surviving_prop).margin(4.0 * s.mean_surviving_prop_se + 1e-12));
    CHECK(s.prob_all_rows_lost ==
          Catch::Approx(exact.prob_all_rows_lost).margin(4.0 * s.prob_all_rows_lost_se + 1e-12));
}

TEST_CASE("Monte Carlo matches exhaustive enumeration across random matrices") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto m = random_matrix(seed);
        for (std::size_t k = 1; k <= m.n_cols(); k += 2) {
            const auto exact = enumerate_exact(m, k);
            const auto mc = run_subsample(m, cfg_for({k}, 20000, seed * 31), 2);
            const auto& s = mc.per_k[0];
            CHECK(s.mean_surviving_prop ==
                  Catch::Approx(exact.mean_surviving_prop)
                      .margin(4.0 * s.mean_surviving_prop_se + 1e-12));
            CHECK(s.prob_all_rows_lost ==
                  Catch::Approx(exact.prob_all_rows_lost)
                      .margin(4.0 * s.prob_all_rows_lost_se + 1e-12));
        }
    }
}

TEST_CASE("coverage of the 4-SE band across 100 seeded trials") {
    const auto m = crafted_4x5();
    const auto exact = enumerate_exact(m, 2);
    int pass = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto mc = run_subsample(m, cfg_for({2}, 4000, seed), 1);
        const auto& s = mc.per_k[0];
        const bool ok_mean = std::abs(s.mean_surviving_prop - exact.mean_surviving_prop) <=
                             4.0 * s.mean_surviving_prop_se + 1e-12;
        const bool ok_prob = std::abs(s.prob_all_rows_lost - exact.prob_all_rows_lost) <=
                             4.0 * s.prob_all_rows_lost_se + 1e-12;
        pass += ok_mean && ok_prob;
    }
    CHECK(pass >= 95);
}

TEST_CASE("exact statistics are monotone in k") {
    for (std::uint64_t seed = 20; seed < 40; ++seed) {
        const auto m = random_matrix(seed);
        double prev_mean = 1.0, prev_prob = 0.0;
        for (std::size_t k = 1; k <= m.n_cols(); ++k) {
            const auto ex = enumerate_exact(m, k);
            CHECK(ex.mean_surviving_prop <= prev_mean + 1e-15);
            CHECK(ex.prob_all_rows_lost >= prev_prob - 1e-15);
            prev_mean = ex.mean_surviving_prop;
            prev_prob = ex.prob_all_rows_lost;
        }
    }
}

TEST_CASE("results are reproducible and worker-count independent") {
    const auto m = testsupport::random_matrix_sized(5, 40, 20, 0.3);
    const auto cfg = cfg_for({1, 3, 5}, 2000, 99);
    const auto a = run_subsample(m, cfg, 1);
    const auto b = run_subsample(m, cfg, 1);
    const auto c = run_subsample(m, cfg, 4);
    REQUIRE(a.per_k.size() == 3);
    for (std::size_t i = 0; i < a.per_k.size(); ++i) {
        CHECK(a.per_k[i].mean_surviving_prop == b.per_k[i].mean_surviving_prop);
        CHECK(a.per_k[i].mean_surviving_prop == c.per_k[i].mean_surviving_prop);
        CHECK(a.per_k[i].prob_all_rows_lost == c.per_k[i].prob_all_rows_lost);
        CHECK(a.per_k[i].mean_surviving_prop_se == c.per_k[i].mean_surviving_prop_se);
    }
}

TEST_CASE("a k's estimates do not depend on the rest of the grid") {
    const auto m = testsupport::random_matrix_sized(8, 30, 15, 0.25);
    const auto alone = run_subsample(m, cfg_for({3}, 1500, 42));
    const auto in_grid = run_subsample(m, cfg_for({1, 3, 7}, 1500, 42));
    CHECK(alone.per_k[0].mean_surviving_prop == in_grid.per_k[1].mean_surviving_prop);
    CHECK(alone.per_k[0].prob_all_rows_lost == in_grid.per_k[1].prob_all_rows_lost);
}

TEST_CASE("columnar survival agrees with the row-major mask route") {
    for (std::uint64_t seed = 50; seed < 60; ++seed) {
        const auto m = random_matrix(seed, 90, 10);
        rowloss::SplitMix64 g = rowloss::derive_stream(seed, 4);
        for (int draw = 0; draw < 5; ++draw) {
            std::vector<std::size_t> cols;
            for (std::size_t j = 0; j < m.n_cols(); ++j)
                if (g.next_unit() < 0.5) cols.push_back(j);
            if (cols.empty()) cols.push_back(0);

            const std::size_t via_mask = rowloss::complete_row_mask_subset(m, cols).popcount();
            const rowloss::detail::ObservedColumns observed(m);
            std::vector<std::uint64_t> acc(observed.words_per_col);
            CHECK(observed.surviving(cols, acc) == via_mask);
        }
    }
}

TEST_CASE("eligible_cols restricts the sampling pool") {
    // column 2 is fully missing; restricting to the observed columns keeps
    // every row alive
    const auto m = rowloss::matrix_from_grid({
        {false, false, true, false},
        {false, false, true, false},
    });
    auto cfg = cfg_for({2}, 500, 6);
    cfg.eligible_cols = {0, 1, 3};
    const auto result = run_subsample(m, cfg);
    CHECK(result.per_k[0].mean_surviving_prop == 1.0);
    CHECK(result.per_k[0].prob_all_rows_lost == 0.0);
}
