#include <doctest.h>

#include "test_helpers.hpp"

#include "msr/approx.hpp"
#include "msr/exact.hpp"
#include "msr/io.hpp"
#include "msr/lp.hpp"

#include <cmath>

using namespace msr;

TEST_CASE("candidate enumeration") {
    Instance pair = Instance::make({{1, 2}, {1, 2}});
    auto candidates = enumerate_candidates(pair, 2);
    REQUIRE(candidates.size() == 1);
    CHECK(candidates[0].ids == SignedSequence{1, 2});
    CHECK(candidates[0].windows[0] == std::pair<int, int>{0, 1});
    CHECK(candidates[0].windows[1] == std::pair<int, int>{0, 1});
    CHECK(candidates[0].weight == 2);

    Instance crossed = Instance::make({{1, 2}, {2, 1}});
    CHECK(enumerate_candidates(crossed, 2).empty());

    // Signed reversal passes the pattern test.
    Instance flipped = Instance::make({{1, 2}, {-2, -1}});
    CHECK(enumerate_candidates(flipped, 2).size() == 1);

    Instance intro = msrtest::intro_instance();
    auto all = enumerate_candidates(intro, 3);
    bool found = false;
    for (const auto& cand : all)
        if (cand.ids == SignedSequence{6, 7, 8}) {
            found = true;
            CHECK(cand.windows[0] == std::pair<int, int>{5, 7});  // positions 6..8
            CHECK(cand.windows[1] == std::pair<int, int>{0, 3});  // covers -5
            CHECK(cand.weight == 3);
        }
    CHECK(found);
}

TEST_CASE("gap bound filters candidates") {
    Instance spread = Instance::make({{1, 2, 3}, {1, 2, 3}}, 0);
    auto candidates = enumerate_candidates(spread, 2);
    // {1,3} has one deleted marker inside its window; delta = 0 drops it.
    for (const auto& cand : candidates)
        CHECK(cand.ids != SignedSequence{1, 3});
}

TEST_CASE("relaxation shapes") {
    Instance pair = Instance::make({{1, 2}, {1, 2}});
    auto candidates = enumerate_candidates(pair, 2);
    auto lp = build_relaxation(candidates, pair);
    CHECK(lp.num_vars() == 1);
    CHECK(lp.num_rows() == 4);  // two covered positions per map
    auto sol = solve_lp(lp);
    CHECK(sol.value == doctest::Approx(2.0));

    Instance three = Instance::make({{1, 2, 3}, {1, 2, 3}});
    auto cands = enumerate_candidates(three, 2);
    auto conflicts = build_conflicts(cands);
    // {1,2} and {2,3} share marker 2 and overlap at its position.
    REQUIRE(cands.size() == 3);
    CHECK(conflicts.conflicts(0, 1));
    auto lp3 = build_relaxation(cands, three);
    bool has_pairwise_row = false;
    for (int r = 0; r < lp3.num_rows(); ++r)
        if (lp3.A.row(r).sum() >= 2.0) has_pairwise_row = true;
    CHECK(has_pairwise_row);
}

TEST_CASE("local ratio selection basics") {
    Instance pair = Instance::make({{1, 2}, {1, 2}});
    auto candidates = enumerate_candidates(pair, 2);
    auto conflicts = build_conflicts(candidates);
    Eigen::VectorXd x(1);
    x << 1.0;
    auto chosen = local_ratio_select(candidates, conflicts, {2.0}, x, pair.d());
    CHECK(chosen == std::vector<int>{0});

    // Two conflicting candidates with weights 2 and 3: the fractional mass
    // concentrated on the heavy one selects it.
    Instance three = Instance::make({{1, 2, 3}, {1, 2, 3}});
    auto cands = enumerate_candidates(three, 2);
    auto cf = build_conflicts(cands);
    REQUIRE(cands.size() == 3);  // {1,2}, {1,3}, {2,3}
    Eigen::VectorXd frac(3);
    frac << 0.0, 0.0, 1.0;
    auto picked = local_ratio_select(cands, cf, {2.0, 2.0, 3.0}, frac, three.d());
    REQUIRE(picked.size() == 1);
    CHECK(picked[0] == 2);
}

TEST_CASE("approximation on the worked example") {
    Instance intro = msrtest::intro_instance();
    auto result = approximate_detailed(intro);
    const int opt = solve_exact(intro).length_value;
    CHECK(result.lp_value >= opt - 1e-6);
    CHECK(result.solution.length_value * 2 * intro.d() >= opt);
    CHECK(verify(intro, result.solution).passed);
    CHECK(result.solution.length_value >= result.selected_weight);
}

TEST_CASE("identical maps approximate well") {
    SignedSequence seq{1, 2, 3, 4, 5, 6};
    Instance instance = Instance::make({seq, seq});
    auto result = approximate_detailed(instance);
    CHECK(result.solution.length_value >=
          (instance.n + 2 * instance.d() - 1) / (2 * instance.d()));
    CHECK(verify(instance, result.solution).passed);
}

TEST_CASE("no candidates means the empty optimum") {
    Instance crossed = Instance::make({{1, 2}, {2, 1}});
    auto result = approximate_detailed(crossed);
    CHECK(result.solution.length_value == 0);
    CHECK(result.lp_value == 0.0);
    CHECK(solve_exact(crossed).length_value == 0);
}

TEST_CASE("ratio and feasibility on random instances") {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed * 5);
        const int d = 2 + rng.below(3);
        const int n = 3 + rng.below(8);
        std::optional<int> delta;
        if (seed % 4 == 0) delta = 1 + rng.below(2);
        Instance instance =
            gen_random_permutation_instance(d, n, seed + 7, delta, rng.coin());
        auto result = approximate_detailed(instance);
        CHECK(verify(instance, result.solution).passed);
        if (!delta) {
            const int opt = solve_exact(instance).length_value;
            CHECK(result.lp_value >= opt - 1e-6);
            CHECK(result.solution.length_value * 2 * d >= opt);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("selected candidates use disjoint windows") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance instance = gen_random_permutation_instance(3, 9, seed + 21);
        auto candidates = enumerate_candidates(instance, 3);
        auto result = approximate_detailed(instance);
        for (size_t i = 0; i < result.selected.size(); ++i)
            for (size_t j = i + 1; j < result.selected.size(); ++j) {
                const auto& a = candidates[result.selected[i]];
                const auto& b = candidates[result.selected[j]];
                for (size_t t = 0; t < a.windows.size(); ++t) {
                    const bool overlap = a.windows[t].first <= b.windows[t].second &&
                                         b.windows[t].first <= a.windows[t].second;
                    CHECK_FALSE(overlap);
                }
            }
    }
}

TEST_CASE("optimal strips split into enumerated candidates") {
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        Instance instance = gen_random_permutation_instance(2, 8, seed + 300);
        Solution opt = solve_exact(instance);
        auto candidates = enumerate_candidates(instance, 3);
        auto has_candidate = [&](const SignedSequence& ids) {
            for (const auto& cand : candidates)
                if (cand.ids == ids) return true;
            return false;
        };
        for (const auto& strip : opt.strips) {
            // Greedy split into pieces of length 2 with one length-3 tail.
            size_t at = 0;
            while (at < strip.size()) {
                size_t len = strip.size() - at == 3 ? 3 : 2;
                CHECK(has_candidate(Strip(strip.begin() + at, strip.begin() + at + len)));
                at += len;
            }
        }
    }
}

TEST_CASE("longer candidate lengths never lower the relaxation value") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Instance instance = gen_random_permutation_instance(2, 7, seed + 31);
        auto lp3 = build_relaxation(enumerate_candidates(instance, 3), instance);
        auto lp4 = build_relaxation(enumerate_candidates(instance, 4), instance);
        const double v3 = solve_lp(lp3).value;
        const double v4 = solve_lp(lp4).value;
        CHECK(v4 >= v3 - 1e-7);
    }
}

TEST_CASE("adjacency weighting stays feasible and LP-dominated") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        Instance instance = gen_random_permutation_instance(2, 7, seed + 61);
        ObjectiveSpec spec{ObjectiveMode::adjacency, Variant::msr};
        // Dominance needs candidates as long as the longest possible strip.
        auto result = approximate_detailed(instance, spec, instance.n);
        CHECK(verify(instance, result.solution).passed);
        const int opt = solve_exact(instance, spec).adjacency_value;
        CHECK(result.lp_value >= opt - 1e-6);
    }
}
