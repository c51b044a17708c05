#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

#include "rowloss/matrix.hpp"
#include "support/random_matrix.hpp"

using rowloss::BitVector;
using rowloss::complete_row_mask;
using rowloss::complete_row_mask_subset;
using rowloss::MissingnessMatrix;
using rowloss::MissingnessMatrixBuilder;
using testsupport::random_matrix;

namespace {

MissingnessMatrix example_3x2() {
    // missing cells {(0,1), (2,0)}
    return rowloss::matrix_from_grid({{false, true}, {false, false}, {true, false}});
}

std::vector<bool> mask_bits(const BitVector& v) {
    std::vector<bool> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.get(i);
    return out;
}

}  // namespace

TEST_CASE("builder rejects degenerate shapes") {
    REQUIRE_THROWS_AS(MissingnessMatrixBuilder(0, 3), std::invalid_argument);
    REQUIRE_THROWS_AS(MissingnessMatrixBuilder(3, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(rowloss::matrix_from_grid({}), std::invalid_argument);
}

TEST_CASE("builder validates column names") {
    MissingnessMatrixBuilder dup(2, 2);
    dup.col_names({"a", "a"});
    REQUIRE_THROWS_AS(dup.build(), std::invalid_argument);

    MissingnessMatrixBuilder wrong(2, 2);
    wrong.col_names({"a"});
    REQUIRE_THROWS_AS(wrong.build(), std::invalid_argument);

    auto m = MissingnessMatrixBuilder(2, 3).build();
    REQUIRE(m.col_names() == std::vector<std::string>{"c1", "c2", "c3"});
}

TEST_CASE("bit packing round-trips an explicit grid") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        rowloss::SplitMix64 g = rowloss::derive_stream(seed, 1);
        const std::size_t rows = 1 + g.next_below(9);
        const std::size_t cols = 1 + g.next_below(130);  // crosses the 64/128 word boundaries
        std::vector<std::vector<bool>> grid(rows, std::vector<bool>(cols));
        for (auto& row : grid)
            for (std::size_t j = 0; j < cols; ++j) row[j] = g.next_unit() < 0.4;

        const auto m = rowloss::matrix_from_grid(grid);
        REQUIRE(m.n_rows() == rows);
        REQUIRE(m.n_cols() == cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) REQUIRE(m.is_missing(i, j) == grid[i][j]);
    }
}

TEST_CASE("complete_row_mask on fully observed and fully missing matrices") {
    const auto all_obs = rowloss::matrix_from_grid({{false, false}, {false, false}});
    CHECK(mask_bits(complete_row_mask(all_obs)) == std::vector<bool>{true, true});

    const auto all_miss = rowloss::matrix_from_grid({{true, true}, {true, true}});
    CHECK(mask_bits(complete_row_mask(all_miss)) == std::vector<bool>{false, false});
}

TEST_CASE("complete_row_mask enumerates the 3x2 example") {
    CHECK(mask_bits(complete_row_mask(example_3x2())) == std::vector<bool>{false, true, false});
}

TEST_CASE("complete_row_mask_subset hand enumerations") {
    const auto m = example_3x2();
    const std::vector<std::size_t> col0{0}, col1{1};
    CHECK(mask_bits(complete_row_mask_subset(m, col0)) == std::vector<bool>{true, true, false});
    CHECK(mask_bits(complete_row_mask_subset(m, col1)) == std::vector<bool>{false, true, true});
}

TEST_CASE("complete_row_mask_subset over all columns equals complete_row_mask") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto m = random_matrix(seed, 20, 140);
        std::vector<std::size_t> all(m.n_cols());
        std::iota(all.begin(), all.end(), std::size_t{0});
        CHECK(complete_row_mask_subset(m, all) == complete_row_mask(m));
    }
}

TEST_CASE("complete_row_mask_subset rejects bad column sets") {
    const auto m = example_3x2();
    const std::vector<std::size_t> empty{}, dup{0, 0}, oob{0, 2};
    CHECK_THROWS_AS(complete_row_mask_subset(m, empty), std::invalid_argument);
    CHECK_THROWS_AS(complete_row_mask_subset(m, dup), std::invalid_argument);
    CHECK_THROWS_AS(complete_row_mask_subset(m, oob), std::invalid_argument);
}

TEST_CASE("survival is antitone in the column set") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto m = random_matrix(seed, 16, 100);
        rowloss::SplitMix64 g = rowloss::derive_stream(seed, 2);
        std::vector<std::size_t> big;
        for (std::size_t j = 0; j < m.n_cols(); ++j)
            if (g.next_unit() < 0.6) big.push_back(j);
        if (big.empty()) big.push_back(0);
        std::vector<std::size_t> small;
        for (std::size_t j : big)
            if (g.next_unit() < 0.5) small.push_back(j);
        if (small.empty()) small.push_back(big.front());

        const auto mask_small = complete_row_mask_subset(m, small);
        const auto mask_big = complete_row_mask_subset(m, big);
        for (std::size_t i = 0; i < m.n_rows(); ++i)
            if (mask_big.get(i)) CHECK(mask_small.get(i));
    }
}

TEST_CASE("profile matches the 3x2 hand count") {
    const auto d = rowloss::profile(example_3x2());
    CHECK(d.n_rows == 3);
    CHECK(d.n_cols == 2);
    CHECK(d.avg_missing_prop == Catch::Approx(2.0 / 6.0).margin(1e-15));
    CHECK(d.max_missing_prop == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(d.n_fully_observed_cols == 0);
    CHECK(d.n_complete_rows == 1);
    REQUIRE(d.per_col_missing_prop.size() == 2);
    CHECK(d.per_col_missing_prop[0] == Catch::Approx(1.0 / 3.0).margin(1e-15));
    CHECK(d.per_col_missing_prop[1] == Catch::Approx(1.0 / 3.0).margin(1e-15));
}

TEST_CASE("profile of a fully observed matrix") {
    const auto m = rowloss::matrix_from_grid(
        std::vector<std::vector<bool>>(4, std::vector<bool>(3, false)));
    const auto d = rowloss::profile(m);
    CHECK(d.avg_missing_prop == 0.0);
    CHECK(d.max_missing_prop == 0.0);
    CHECK(d.n_fully_observed_cols == 3);
    CHECK(d.n_complete_rows == 4);
}

TEST_CASE("complete rows and rows with missingness partition the matrix") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto m = random_matrix(seed);
        std::size_t with_missing = 0;
        for (std::size_t i = 0; i < m.n_rows(); ++i) {
            bool any = false;
            for (std::size_t j = 0; j < m.n_cols(); ++j) any |= m.is_missing(i, j);
            with_missing += any;
        }
        CHECK(complete_row_mask(m).popcount() + with_missing == m.n_rows());
    }
}

TEST_CASE("profile is invariant under row and column permutations") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto m = random_matrix(seed, 10, 12);
        rowloss::SplitMix64 g = rowloss::derive_stream(seed, 3);

        std::vector<std::size_t> rperm(m.n_rows()), cperm(m.n_cols());
        std::iota(rperm.begin(), rperm.end(), std::size_t{0});
        std::iota(cperm.begin(), cperm.end(), std::size_t{0});
        for (std::size_t i = rperm.size(); i > 1; --i)
            std::swap(rperm[i - 1], rperm[g.next_below(i)]);
        for (std::size_t i = cperm.size(); i > 1; --i)
            std::swap(cperm[i - 1], cperm[g.next_below(i)]);

        MissingnessMatrixBuilder b(m.n_rows(), m.n_cols());
        for (std::size_t i = 0; i < m.n_rows(); ++i)
            for (std::size_t j = 0; j < m.n_cols(); ++j)
                if (m.is_missing(rperm[i], cperm[j])) b.set_missing(i, j);
        const auto permuted = b.build();

        const auto a = rowloss::profile(m);
        const auto p = rowloss::profile(permuted);
        CHECK(a.avg_missing_prop == p.avg_missing_prop);
        CHECK(a.max_missing_prop == p.max_missing_prop);
        CHECK(a.n_fully_observed_cols == p.n_fully_observed_cols);
        CHECK(a.n_complete_rows == p.n_complete_rows);

        auto sorted_a = a.per_col_missing_prop;
        auto sorted_p = p.per_col_missing_prop;
        std::sort(sorted_a.begin(), sorted_a.end());
        std::sort(sorted_p.begin(), sorted_p.end());
        CHECK(sorted_a == sorted_p);
    }
}

TEST_CASE("avg_missing_prop equals the mean of the per-column proportions") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const auto d = rowloss::profile(random_matrix(seed, 14, 20));
        double mean = 0.0;
        for (double p : d.per_col_missing_prop) mean += p;
        mean /= static_cast<double>(d.per_col_missing_prop.size());
        CHECK(d.avg_missing_prop == Catch::Approx(mean).margin(1e-12));
    }
}

TEST_CASE("column patterns agree with cell-level reads") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto m = random_matrix(seed, 70, 9);  // rows cross the word boundary
        const auto cols = rowloss::column_missing_patterns(m);
        REQUIRE(cols.n_rows == m.n_rows());
        for (std::size_t j = 0; j < m.n_cols(); ++j) {
            auto pattern = cols.col(j);
            for (std::size_t i = 0; i < m.n_rows(); ++i) {
                const bool bit = (pattern[i >> 6] >> (i & 63)) & 1u;
                REQUIRE(bit == m.is_missing(i, j));
            }
        }
    }
}
