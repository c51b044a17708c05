// Minimal tour of the library: synthesize a missingness matrix, profile it,
// and compare the empirical all-rows-lost frequency with the analytic bound.

#include <cstdio>

#include "rowloss/bounds.hpp"
#include "rowloss/dgp.hpp"
#include "rowloss/groups.hpp"
#include "rowloss/matrix.hpp"

int main() {
    rowloss::DgpSpec spec;
    spec.n = 50;
    spec.k = 40;
    spec.mechanism = rowloss::IidMechanism{0.9};  // each cell observed with prob 0.9
    spec.seed = 2024;

    const auto m = rowloss::generate(spec);
    const auto prof = rowloss::profile(m);
    std::printf("synthetic %zux%zu matrix: avg missing %.3f, complete rows %zu, groups %zu\n",
                prof.n_rows, prof.n_cols, prof.avg_missing_prop, prof.n_complete_rows,
                rowloss::detect_groups(m).n_groups);

    const auto est = rowloss::estimate_p_all(spec, 20000);
    const double bound = rowloss::p_all_lower_bound(spec.n, spec.k, 0.9);
    std::printf("P(all rows lost): estimated %.4f (se %.4f), lower bound %.4f\n", est.estimate,
                est.std_error, bound);

    std::printf("\nlargest k keeping P(all lost) <= 0.5 at q*=0.9:\n");
    for (std::uint64_t n : {100ULL, 1000ULL, 10000ULL})
        std::printf("  n=%-6llu k=%llu\n", static_cast<unsigned long long>(n),
                    static_cast<unsigned long long>(rowloss::max_k_for_target(n, 0.9, 0.5)));
    return 0;
}
