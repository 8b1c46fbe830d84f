#include "msr/exact.hpp"

#include "msr/approx.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace msr {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point at;
    long counter = 0;

    explicit Deadline(double seconds)
        : at(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                std::chrono::duration<double>(seconds))) {}

    bool expired() {
        if ((++counter & 0x3ff) != 0) return false;
        return Clock::now() >= at;
    }
};

// ---------------------------------------------------------------------------
// Engine 1: subset depth-first search.
// ---------------------------------------------------------------------------

struct SubsetSearch {
    const Instance& instance;
    ObjectiveSpec objective;
    bool pruning;
    Deadline deadline;

    std::vector<int> kept;
    std::optional<Solution> best;
    int best_value = 0;
    int best_size = -1;

    SubsetSearch(const Instance& inst, const ObjectiveSpec& obj,
                 const ExactConfig& config)
        : instance(inst), objective(obj), pruning(config.pruning),
          deadline(config.time_limit_seconds) {}

    // Effective value to maximize; cmsr (minimize x) is the same search as
    // length because x = n - l.
    int leaf_value(const Solution& sol) const {
        return objective.mode == ObjectiveMode::adjacency ? sol.adjacency_value
                                                          : sol.length_value;
    }

    // Length objective: the enumeration order (descending kept size, then
    // smallest indicator vector) is walked literally by raising the deletion
    // budget; the first feasible kept set is the tie-broken optimum.
    Solution run_length() {
        best = evaluate(instance, {});  // truthful incumbent for timeouts
        std::vector<char> is_deleted(instance.n + 1, 0);
        std::optional<Solution> found;

        std::function<bool(int, int)> place = [&](int next_id, int remaining) {
            if (deadline.expired())
                throw timeout_error("exact search exceeded its time limit", best);
            if (remaining == 0) {
                std::vector<int> candidate;
                for (int id = 1; id <= instance.n; ++id)
                    if (!is_deleted[id]) candidate.push_back(id);
                auto sol = evaluate(instance, candidate);
                if (!sol) return false;
                found = std::move(sol);
                return true;
            }
            for (int id = next_id; id + remaining - 1 <= instance.n; ++id) {
                is_deleted[id] = 1;
                const bool done = place(id + 1, remaining - 1);
                is_deleted[id] = 0;
                if (done) return true;
            }
            return false;
        };

        for (int deletions = 0; deletions <= instance.n; ++deletions)
            if (place(1, deletions)) {
                best = found;
                return *found;
            }
        throw internal_error("the empty kept set is always feasible");
    }

    bool prune(int depth) const {
        if (!pruning || !best) return false;
        const int bound = incumbent_upper_bound(static_cast<int>(kept.size()),
                                                instance.n - depth);
        const int value_bound = bound >= 2 ? bound - 1 : 0;
        if (value_bound < best_value) return true;
        return value_bound == best_value && bound <= best_size;
    }

    void dfs(int depth) {
        if (deadline.expired())
            throw timeout_error("exact search exceeded its time limit", best);
        if (prune(depth)) return;
        if (depth == instance.n) {
            auto sol = evaluate(instance, kept);
            if (!sol) return;
            const int value = leaf_value(*sol);
            const int size = sol->length_value;
            if (!best || value > best_value ||
                (value == best_value && size > best_size)) {
                best = std::move(sol);
                best_value = value;
                best_size = size;
            }
            return;
        }
        // Delete-first realizes the indicator-vector tie order.
        dfs(depth + 1);
        kept.push_back(depth + 1);
        dfs(depth + 1);
        kept.pop_back();
    }

    Solution run() {
        if (objective.mode == ObjectiveMode::length) return run_length();
        dfs(0);
        if (!best) throw internal_error("the empty kept set is always feasible");
        return *best;
    }
};

// ---------------------------------------------------------------------------
// Engine 2: exact candidate packing (length objective).
//
// Conflict-free candidate families and feasible kept sets carry the same
// total length, so a maximum-weight independent set over all 2/3-candidates
// equals the optimum.  Under a gap bound a family union may still merge into
// a strip with an oversized boundary gap; such families are excluded lazily.
// ---------------------------------------------------------------------------

struct Packing {
    const Instance& instance;
    std::vector<StripCandidate> candidates;
    std::vector<std::vector<int>> neighbors;
    Deadline deadline;

    explicit Packing(const Instance& inst, const ExactConfig& config)
        : instance(inst), deadline(config.time_limit_seconds) {
        candidates = enumerate_candidates(inst, std::min(3, inst.n));
        neighbors = build_conflicts(candidates).neighbors;
    }

    int weight(int v, const std::vector<int>& bonus_ids) const {
        int w = candidates[v].size();
        for (SignedMarker m : candidates[v].ids)
            if (std::binary_search(bonus_ids.begin(), bonus_ids.end(), std::abs(m)))
                w += bonus_unit;
        return w;
    }

    int bonus_unit = 0;

    struct BestFamily {
        long weight = -1;
        std::vector<int> members;
    };

    std::optional<Solution> incumbent;  // best gap-feasible union seen

    // Maximum-weight conflict-free family among `allowed` candidates,
    // skipping exact families listed in `nogoods`.  Deterministic.
    BestFamily max_family(const std::vector<char>& allowed,
                          const std::vector<int>& bonus_ids,
                          const std::set<std::vector<int>>& nogoods) {
        const int c = static_cast<int>(candidates.size());
        std::vector<int> w(c);
        std::vector<int> order;
        for (int v = 0; v < c; ++v) {
            w[v] = weight(v, bonus_ids);
            if (allowed[v]) order.push_back(v);
        }
        BestFamily best;
        std::vector<int> current;
        std::vector<int> blocked(c, 0);

        auto consider = [&](long total) {
            if (total <= best.weight) return;
            std::vector<int> sorted = current;
            std::sort(sorted.begin(), sorted.end());
            if (nogoods.count(sorted)) return;
            best.weight = total;
            best.members = std::move(sorted);
        };

        // Greedy clique-cover bound over the still-available suffix: an
        // independent set takes at most one candidate per clique.
        auto bound_from = [&](size_t start_idx) {
            std::vector<std::vector<int>> cliques;
            std::vector<int> clique_max;
            for (size_t k = start_idx; k < order.size(); ++k) {
                const int v = order[k];
                if (blocked[v]) continue;
                bool placed = false;
                for (size_t q = 0; q < cliques.size(); ++q) {
                    bool fits = true;
                    for (int u : cliques[q])
                        if (!std::binary_search(neighbors[v].begin(),
                                                neighbors[v].end(), u)) {
                            fits = false;
                            break;
                        }
                    if (fits) {
                        cliques[q].push_back(v);
                        clique_max[q] = std::max(clique_max[q], w[v]);
                        placed = true;
                        break;
                    }
                }
                if (!placed) {
                    cliques.push_back({v});
                    clique_max.push_back(w[v]);
                }
            }
            long bound = 0;
            for (int mx : clique_max) bound += mx;
            return bound;
        };

        std::function<void(size_t, long)> recurse = [&](size_t idx, long total) {
            if (deadline.expired())
                throw timeout_error("exact search exceeded its time limit",
                                    incumbent);
            consider(total);
            while (idx < order.size() && blocked[order[idx]]) ++idx;
            if (idx == order.size()) return;
            if (total + bound_from(idx) <= best.weight) return;
            const int v = order[idx];
            // Include v.
            current.push_back(v);
            blocked[v] += 1;
            for (int u : neighbors[v]) blocked[u] += 1;
            recurse(idx + 1, total + w[v]);
            for (int u : neighbors[v]) blocked[u] -= 1;
            blocked[v] -= 1;
            current.pop_back();
            // Exclude v.
            blocked[v] += 1;
            recurse(idx + 1, total);
            blocked[v] -= 1;
        };
        recurse(0, 0);
        return best;
    }

    IdSet family_union(const std::vector<int>& members) const {
        std::vector<int> ids;
        for (int v : members)
            for (SignedMarker m : candidates[v].ids) ids.push_back(std::abs(m));
        return normalize_id_set(ids, instance.n);
    }

    // Best family whose union actually evaluates (gap-feasible); returns the
    // achieved length given the include/exclude constraints, or -1 when the
    // bonus coverage target cannot be met.
    long constrained_optimum(const std::vector<int>& must_keep,
                             const std::vector<int>& must_delete) {
        const int c = static_cast<int>(candidates.size());
        std::vector<char> allowed(c, 1);
        for (int v = 0; v < c; ++v)
            for (SignedMarker m : candidates[v].ids)
                if (std::binary_search(must_delete.begin(), must_delete.end(),
                                       std::abs(m)))
                    allowed[v] = 0;
        std::set<std::vector<int>> nogoods;
        bonus_unit = 2 * instance.n + 1;
        const long target_bonus =
            static_cast<long>(bonus_unit) * static_cast<long>(must_keep.size());
        for (int guard = 0; guard < 100000; ++guard) {
            BestFamily fam = max_family(allowed, must_keep, nogoods);
            if (fam.weight < target_bonus) return -1;
            IdSet kept = family_union(fam.members);
            auto sol = evaluate(instance, kept);
            if (sol && (!incumbent ||
                        sol->length_value > incumbent->length_value))
                incumbent = sol;
            if (sol && sol->length_value == fam.weight - target_bonus) {
                for (int id : must_keep)
                    if (!std::binary_search(kept.begin(), kept.end(), id))
                        return -1;
                return fam.weight - target_bonus;
            }
            nogoods.insert(fam.members);
        }
        throw internal_error("gap-exclusion loop failed to converge");
    }

    Solution run() {
        const long optimum = constrained_optimum({}, {});
        if (optimum < 0) throw internal_error("empty family is always feasible");
        // Rebuild the tie-broken witness: smallest indicator vector means
        // deleting the lowest ids whenever an optimal solution still exists.
        std::vector<int> keep_ids, delete_ids;
        for (int id = 1; id <= instance.n; ++id) {
            std::vector<int> try_delete = delete_ids;
            try_delete.push_back(id);
            if (constrained_optimum(keep_ids, try_delete) == optimum) {
                delete_ids = std::move(try_delete);
            } else {
                keep_ids.push_back(id);
            }
        }
        auto sol = evaluate(instance, keep_ids);
        if (!sol || sol->length_value != optimum)
            throw internal_error("witness reconstruction lost the optimum");
        return *sol;
    }
};

}  // namespace

Solution solve_exact(const Instance& instance, const ObjectiveSpec& objective,
                     const ExactConfig& config) {
    if (objective.variant == Variant::cmsr &&
        objective.mode == ObjectiveMode::adjacency)
        throw input_error("cmsr is defined for the length objective only");
    if (instance.n > config.subset_search_limit && config.pruning &&
        objective.mode == ObjectiveMode::length) {
        Packing packing(instance, config);
        return packing.run();
    }
    SubsetSearch search(instance, objective, config);
    return search.run();
}

}  // namespace msr
