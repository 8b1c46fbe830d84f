#pragma once

// Polynomial-time 2d-approximation: enumerate short candidate strips
// (lengths 2..L), build their per-map windows, solve the point-capacity LP
// relaxation over the resulting conflict structure, select an independent
// subset by the fractional local-ratio schema, and assemble a feasible
// solution from the union of the selected candidates.

#include "msr/core.hpp"
#include "msr/lp.hpp"

#include <utility>
#include <vector>

namespace msr {

// A candidate strip: 2..L marker ids together with, per map, the minimal
// window [start, end] (0-based original positions) containing all of them.
struct StripCandidate {
    SignedSequence ids;                            // map-1 order and signs
    std::vector<std::pair<int, int>> windows;      // one per map
    int weight = 0;                                // |ids| or |ids|-1

    int size() const { return static_cast<int>(ids.size()); }
};

// Per-candidate closed neighborhoods under the conflict relation: two
// candidates conflict iff their windows overlap in some map or they share a
// marker id (the latter is implied by the former but guards degenerate
// window arithmetic).
struct ConflictStructure {
    std::vector<std::vector<int>> neighbors;  // open neighborhoods, sorted

    bool conflicts(int a, int b) const;
    int size() const { return static_cast<int>(neighbors.size()); }
};

struct ApproxResult {
    Solution solution;
    double lp_value = 0.0;
    std::vector<int> selected;   // indices into the candidate list
    int selected_weight = 0;
};

// All id subsets of size 2..L whose pattern is consistent in every map
// (map-1 order with identical signs, or reversed order with all signs
// flipped) and that satisfy the instance gap bound inside their own windows.
// Candidates come out in a fixed deterministic order.
std::vector<StripCandidate> enumerate_candidates(const Instance& instance,
                                                 int max_len,
                                                 ObjectiveMode mode = ObjectiveMode::length);

ConflictStructure build_conflicts(const std::vector<StripCandidate>& candidates);

// One variable per candidate; one capacity constraint per (map, position)
// covered by at least one window, plus one per marker id shared by two or
// more candidates.
LpProblem build_relaxation(const std::vector<StripCandidate>& candidates,
                           const Instance& instance);

// Fractional local-ratio selection.  `x` must be feasible for the
// relaxation.  Asserts the selection-lemma premise (fractional closed
// neighborhood mass <= 2d at the chosen vertex on every level) and throws
// internal_error with diagnostics if it fails.
std::vector<int> local_ratio_select(const std::vector<StripCandidate>& candidates,
                                    const ConflictStructure& conflicts,
                                    const std::vector<double>& weights,
                                    const Eigen::VectorXd& x, int d);

ApproxResult approximate_detailed(const Instance& instance,
                                  const ObjectiveSpec& objective = {},
                                  int max_len = 3);

Solution approximate(const Instance& instance, const ObjectiveSpec& objective = {},
                     int max_len = 3);

}  // namespace msr
