#include "msr/approx.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace msr {

namespace {

struct MapLayout {
    std::vector<int> pos;   // by id, 0-based original position
    std::vector<int> sign;  // by id
};

std::vector<MapLayout> layout_maps(const Instance& instance) {
    std::vector<MapLayout> layouts(instance.maps.size());
    for (size_t t = 0; t < instance.maps.size(); ++t) {
        auto& lay = layouts[t];
        lay.pos.assign(instance.n + 1, -1);
        lay.sign.assign(instance.n + 1, 0);
        const auto& map = instance.maps[t];
        for (int p = 0; p < static_cast<int>(map.size()); ++p) {
            const int id = std::abs(map[p]);
            lay.pos[id] = p;
            lay.sign[id] = map[p] < 0 ? -1 : 1;
        }
    }
    return layouts;
}

// Tries to realize `ids` (given in map-1 order with map-1 signs) in map t:
// forward with identical signs or reversed with flipped signs.  On success
// fills the minimal window and returns true.
bool window_in_map(const SignedSequence& ids, const MapLayout& lay,
                   std::pair<int, int>* window) {
    const int k = static_cast<int>(ids.size());
    bool fwd = true, rev = true;
    for (int i = 0; i < k; ++i) {
        const int id = std::abs(ids[i]);
        const int sign = ids[i] < 0 ? -1 : 1;
        fwd = fwd && lay.sign[id] == sign;
        rev = rev && lay.sign[id] == -sign;
        if (i > 0) {
            const int prev = std::abs(ids[i - 1]);
            fwd = fwd && lay.pos[id] > lay.pos[prev];
            rev = rev && lay.pos[id] < lay.pos[prev];
        }
        if (!fwd && !rev) return false;
    }
    int lo = lay.pos[std::abs(ids.front())];
    int hi = lo;
    for (int i = 1; i < k; ++i) {
        lo = std::min(lo, lay.pos[std::abs(ids[i])]);
        hi = std::max(hi, lay.pos[std::abs(ids[i])]);
    }
    *window = {lo, hi};
    return true;
}

// Largest count of non-candidate markers between consecutive candidate
// markers inside the candidate's own window of map t.
int internal_gap(const SignedSequence& ids, const MapLayout& lay) {
    std::vector<int> positions;
    positions.reserve(ids.size());
    for (SignedMarker m : ids) positions.push_back(lay.pos[std::abs(m)]);
    std::sort(positions.begin(), positions.end());
    int gap = 0;
    for (size_t i = 1; i < positions.size(); ++i)
        gap = std::max(gap, positions[i] - positions[i - 1] - 1);
    return gap;
}

void emit_if_candidate(const Instance& instance,
                       const std::vector<MapLayout>& layouts,
                       const std::vector<int>& chosen, ObjectiveMode mode,
                       std::vector<StripCandidate>* out) {
    // Order the ids by map-1 position and attach map-1 signs.
    std::vector<int> sorted = chosen;
    std::sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        return layouts[0].pos[a] < layouts[0].pos[b];
    });
    StripCandidate cand;
    cand.ids.reserve(sorted.size());
    for (int id : sorted) cand.ids.push_back(layouts[0].sign[id] * id);

    cand.windows.resize(instance.maps.size());
    for (size_t t = 0; t < instance.maps.size(); ++t)
        if (!window_in_map(cand.ids, layouts[t], &cand.windows[t])) return;
    if (instance.delta)
        for (const auto& lay : layouts)
            if (internal_gap(cand.ids, lay) > *instance.delta) return;

    cand.weight = mode == ObjectiveMode::adjacency ? cand.size() - 1 : cand.size();
    out->push_back(std::move(cand));
}

void enumerate_subsets(const Instance& instance,
                       const std::vector<MapLayout>& layouts, int max_len,
                       ObjectiveMode mode, std::vector<int>* chosen, int next,
                       std::vector<StripCandidate>* out) {
    if (chosen->size() >= 2)
        emit_if_candidate(instance, layouts, *chosen, mode, out);
    if (static_cast<int>(chosen->size()) == max_len) return;
    for (int id = next; id <= instance.n; ++id) {
        chosen->push_back(id);
        enumerate_subsets(instance, layouts, max_len, mode, chosen, id + 1, out);
        chosen->pop_back();
    }
}

}  // namespace

std::vector<StripCandidate> enumerate_candidates(const Instance& instance,
                                                 int max_len,
                                                 ObjectiveMode mode) {
    if (max_len < 2 || max_len > instance.n)
        throw input_error("candidate length bound must be in 2..n");
    auto layouts = layout_maps(instance);
    std::vector<StripCandidate> out;
    std::vector<int> chosen;
    enumerate_subsets(instance, layouts, max_len, mode, &chosen, 1, &out);
    return out;
}

bool ConflictStructure::conflicts(int a, int b) const {
    const auto& na = neighbors[a];
    return std::binary_search(na.begin(), na.end(), b);
}

ConflictStructure build_conflicts(const std::vector<StripCandidate>& candidates) {
    const int c = static_cast<int>(candidates.size());
    ConflictStructure cs;
    cs.neighbors.assign(c, {});
    auto share_id = [](const StripCandidate& a, const StripCandidate& b) {
        for (SignedMarker ma : a.ids)
            for (SignedMarker mb : b.ids)
                if (std::abs(ma) == std::abs(mb)) return true;
        return false;
    };
    for (int i = 0; i < c; ++i) {
        for (int j = i + 1; j < c; ++j) {
            bool overlap = false;
            for (size_t t = 0; t < candidates[i].windows.size() && !overlap; ++t) {
                const auto& wa = candidates[i].windows[t];
                const auto& wb = candidates[j].windows[t];
                overlap = wa.first <= wb.second && wb.first <= wa.second;
            }
            if (overlap || share_id(candidates[i], candidates[j])) {
                cs.neighbors[i].push_back(j);
                cs.neighbors[j].push_back(i);
            }
        }
    }
    return cs;
}

LpProblem build_relaxation(const std::vector<StripCandidate>& candidates,
                           const Instance& instance) {
    const int c = static_cast<int>(candidates.size());
    LpProblem lp;
    lp.c = Eigen::VectorXd::Zero(c);
    for (int v = 0; v < c; ++v) lp.c(v) = candidates[v].weight;

    std::vector<std::vector<int>> rows;
    for (size_t t = 0; t < instance.maps.size(); ++t) {
        for (int p = 0; p < instance.n; ++p) {
            std::vector<int> covering;
            for (int v = 0; v < c; ++v) {
                const auto& w = candidates[v].windows[t];
                if (w.first <= p && p <= w.second) covering.push_back(v);
            }
            if (!covering.empty()) rows.push_back(std::move(covering));
        }
    }
    for (int id = 1; id <= instance.n; ++id) {
        std::vector<int> holding;
        for (int v = 0; v < c; ++v)
            for (SignedMarker m : candidates[v].ids)
                if (std::abs(m) == id) {
                    holding.push_back(v);
                    break;
                }
        if (holding.size() >= 2) rows.push_back(std::move(holding));
    }

    const int m = static_cast<int>(rows.size());
    lp.A = Eigen::MatrixXd::Zero(m, c);
    lp.b = Eigen::VectorXd::Ones(m);
    for (int i = 0; i < m; ++i)
        for (int v : rows[i]) lp.A(i, v) = 1.0;
    return lp;
}

std::vector<int> local_ratio_select(const std::vector<StripCandidate>& candidates,
                                    const ConflictStructure& conflicts,
                                    const std::vector<double>& weights,
                                    const Eigen::VectorXd& x, int d) {
    constexpr double kSupportThreshold = 1e-9;
    const int c = static_cast<int>(candidates.size());
    std::vector<char> active(c, 1);
    std::vector<double> w = weights;

    // Iterative rendering of the recursion: peel off one level at a time,
    // remembering the chosen vertex, then fold the stack back adding each
    // vertex when still independent of the set built so far.
    std::vector<int> stack;
    while (true) {
        int best = -1;
        double best_mass = 0.0;
        for (int v = 0; v < c; ++v) {
            if (!active[v] || w[v] <= 0.0 || x(v) < kSupportThreshold) continue;
            double mass = x(v);
            for (int u : conflicts.neighbors[v])
                if (active[u] && w[u] > 0.0) mass += x(u);
            if (best < 0 || mass < best_mass - 1e-12) {
                best = v;
                best_mass = mass;
            }
        }
        if (best < 0) break;
        if (best_mass > 2.0 * d + 1e-6) {
            std::ostringstream oss;
            oss << "selection lemma violated: fractional closed neighborhood "
                << best_mass << " > " << 2 * d << " at candidate " << best
                << " (x =";
            for (int v = 0; v < c; ++v)
                if (active[v] && x(v) >= kSupportThreshold) oss << ' ' << v << ':' << x(v);
            oss << ")";
            throw internal_error(oss.str());
        }
        stack.push_back(best);
        const double wv = w[best];
        w[best] -= wv;
        for (int u : conflicts.neighbors[best])
            if (active[u]) w[u] -= wv;
        for (int v = 0; v < c; ++v)
            if (active[v] && w[v] <= 1e-12) active[v] = 0;
    }

    std::vector<int> selected;
    std::vector<char> blocked(c, 0);
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        const int v = *it;
        if (blocked[v]) continue;
        selected.push_back(v);
        blocked[v] = 1;
        for (int u : conflicts.neighbors[v]) blocked[u] = 1;
    }
    std::sort(selected.begin(), selected.end());
    return selected;
}

namespace {

// Under a gap bound, merging adjacent selected candidates into one maximal
// strip can create a boundary gap above delta even though each candidate is
// internally fine.  Drop the later offender until the union evaluates.
std::optional<Solution> assemble_with_gap_repair(
    const Instance& instance, const std::vector<StripCandidate>& candidates,
    std::vector<int>* selected) {
    while (true) {
        std::vector<int> kept_ids;
        for (int v : *selected)
            for (SignedMarker m : candidates[v].ids) kept_ids.push_back(std::abs(m));
        auto sol = evaluate(instance, normalize_id_set(kept_ids, instance.n));
        if (sol || selected->empty()) return sol;
        selected->pop_back();
    }
}

}  // namespace

ApproxResult approximate_detailed(const Instance& instance,
                                  const ObjectiveSpec& objective, int max_len) {
    ApproxResult result;
    if (instance.n < 2) {
        auto sol = evaluate(instance, {}, objective);
        if (!sol) throw internal_error("empty kept set must be feasible");
        result.solution = *sol;
        return result;
    }
    auto candidates =
        enumerate_candidates(instance, std::min(max_len, instance.n), objective.mode);
    if (candidates.empty()) {
        auto sol = evaluate(instance, {}, objective);
        if (!sol) throw internal_error("empty kept set must be feasible");
        result.solution = *sol;
        return result;
    }

    auto conflicts = build_conflicts(candidates);
    LpProblem lp = build_relaxation(candidates, instance);
    LpSolution lp_sol = solve_lp(lp);
    if (lp_sol.status != LpStatus::optimal)
        throw internal_error("candidate relaxation must be bounded and feasible");
    result.lp_value = lp_sol.value;

    std::vector<double> weights(candidates.size());
    for (size_t v = 0; v < candidates.size(); ++v) weights[v] = candidates[v].weight;
    auto selected =
        local_ratio_select(candidates, conflicts, weights, lp_sol.x, instance.d());

    auto sol = assemble_with_gap_repair(instance, candidates, &selected);
    if (!sol) throw internal_error("candidate union failed to evaluate");
    result.solution = *sol;
    result.selected = selected;
    for (int v : selected) result.selected_weight += candidates[v].weight;
    return result;
}

Solution approximate(const Instance& instance, const ObjectiveSpec& objective,
                     int max_len) {
    return approximate_detailed(instance, objective, max_len).solution;
}

}  // namespace msr
