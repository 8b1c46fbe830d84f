#pragma once

#include "msr/core.hpp"
#include "msr/io.hpp"
#include "msr/reductions.hpp"

#include <string>

namespace msrtest {

inline std::string data_path(const std::string& name) {
    return std::string(MSR_TEST_DATA_DIR) + "/" + name;
}

inline msr::Instance intro_instance() {
    return msr::load_instance(data_path("intro.msr"));
}

inline msr::IdSet intro_optimal_kept() {
    return {1, 3, 6, 7, 8, 10, 11, 12};
}

// Independent oracle: filter all 2^n kept sets through evaluate, walking
// indicator vectors in ascending order (id 1 is the most significant bit)
// and keeping the first subset per strictly better (value, size).
inline msr::Solution naive_solve(const msr::Instance& instance,
                                 const msr::ObjectiveSpec& objective = {}) {
    using namespace msr;
    std::optional<Solution> best;
    int best_value = 0, best_size = -1;
    const int n = instance.n;
    for (long mask = 0; mask < (1L << n); ++mask) {
        IdSet kept;
        for (int id = 1; id <= n; ++id)
            if (mask & (1L << (n - id))) kept.push_back(id);
        auto sol = evaluate(instance, kept);
        if (!sol) continue;
        const int value = objective.mode == ObjectiveMode::adjacency
                              ? sol->adjacency_value
                              : sol->length_value;
        if (!best || value > best_value ||
            (value == best_value && sol->length_value > best_size)) {
            best_value = value;
            best_size = sol->length_value;
            best = std::move(sol);
        }
    }
    return *best;
}

// A feasible solution sampled by packing random non-conflicting candidate
// strips; used to fuzz the canonicalizer and the back-maps.
msr::Solution random_feasible_solution(const msr::Instance& instance,
                                       msr::Rng& rng);

}  // namespace msrtest
