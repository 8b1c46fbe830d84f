#pragma once

// Exact optimization over kept-marker subsets; the ground-truth oracle for
// everything else.  Two interchangeable engines sit behind one contract:
//
//  * subset search: depth-first over ids 1..n in the fixed enumeration order
//    (descending kept size, ties by lexicographically smallest indicator
//    vector, i.e. smallest deleted set), with branch-and-bound on the
//    remaining-marker upper bound;
//  * candidate packing: for larger length-objective instances, an exact
//    maximum-weight independent-set search over candidate strips of lengths
//    2..3 (any strip splits into such pieces with pairwise disjoint windows,
//    so the optima coincide), followed by a marker-by-marker reconstruction
//    of the same tie-broken witness the subset order would return.

#include "msr/core.hpp"

#include <chrono>

namespace msr {

struct ExactConfig {
    double time_limit_seconds = 300.0;
    bool pruning = true;
    // Largest n handed to the subset engine (length objective); above it the
    // candidate-packing engine takes over.  Tests lower it to cross-check the
    // two engines.
    int subset_search_limit = 24;
};

// Raised when the time limit expires; carries the best incumbent found.
class timeout_error : public std::runtime_error {
public:
    timeout_error(std::string what, std::optional<Solution> incumbent)
        : std::runtime_error(std::move(what)), incumbent(std::move(incumbent)) {}
    std::optional<Solution> incumbent;
};

// Trivial upper bound on achievable total strip length from a partial
// assignment: every undecided marker may still be kept.
inline int incumbent_upper_bound(int decided_kept, int undecided) {
    return decided_kept + undecided;
}

Solution solve_exact(const Instance& instance, const ObjectiveSpec& objective = {},
                     const ExactConfig& config = {});

}  // namespace msr
