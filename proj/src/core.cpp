#include "msr/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace msr {

int StripPartition::total_length() const {
    int total = 0;
    for (const auto& s : strips) total += static_cast<int>(s.size());
    return total;
}

Instance Instance::make(std::vector<SignedSequence> maps,
                        std::optional<int> delta) {
    if (maps.size() < 2) throw input_error("an instance needs at least 2 maps");
    const int n = static_cast<int>(maps.front().size());
    if (delta && *delta < 0) throw input_error("delta must be non-negative");
    bool all_positive = true;
    for (size_t t = 0; t < maps.size(); ++t) {
        const auto& map = maps[t];
        if (static_cast<int>(map.size()) != n)
            throw input_error("map " + std::to_string(t + 1) +
                              " has a different length than map 1");
        std::vector<char> seen(n + 1, 0);
        for (SignedMarker m : map) {
            const int id = std::abs(m);
            if (id < 1 || id > n)
                throw input_error("map " + std::to_string(t + 1) +
                                  ": marker id " + std::to_string(id) +
                                  " outside 1.." + std::to_string(n));
            if (seen[id])
                throw input_error("map " + std::to_string(t + 1) +
                                  ": duplicate marker id " + std::to_string(id));
            seen[id] = 1;
            if (m < 0) all_positive = false;
        }
    }
    Instance instance;
    instance.maps = std::move(maps);
    instance.n = n;
    instance.delta = delta;
    instance.all_positive = all_positive;
    return instance;
}

IdSet normalize_id_set(std::vector<int> ids, int n) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids)
        if (id < 1 || id > n)
            throw input_error("id " + std::to_string(id) + " outside 1.." +
                              std::to_string(n));
    return ids;
}

std::vector<SignedSequence> induced_subsequences(const Instance& instance,
                                                 const IdSet& kept) {
    std::vector<char> in_kept(instance.n + 1, 0);
    for (int id : kept) {
        if (id < 1 || id > instance.n)
            throw input_error("kept id " + std::to_string(id) + " outside 1.." +
                              std::to_string(instance.n));
        in_kept[id] = 1;
    }
    std::vector<SignedSequence> result;
    result.reserve(instance.maps.size());
    for (const auto& map : instance.maps) {
        SignedSequence sub;
        sub.reserve(kept.size());
        for (SignedMarker m : map)
            if (in_kept[std::abs(m)]) sub.push_back(m);
        result.push_back(std::move(sub));
    }
    return result;
}

namespace {

struct MapIndex {
    std::vector<int> pos;   // by id, -1 if absent
    std::vector<int> sign;  // by id, +1/-1
};

MapIndex index_subsequence(const SignedSequence& seq, int max_id) {
    MapIndex idx;
    idx.pos.assign(max_id + 1, -1);
    idx.sign.assign(max_id + 1, 0);
    for (int p = 0; p < static_cast<int>(seq.size()); ++p) {
        const int id = std::abs(seq[p]);
        idx.pos[id] = p;
        idx.sign[id] = seq[p] < 0 ? -1 : 1;
    }
    return idx;
}

}  // namespace

RawPartition raw_strip_partition(const std::vector<SignedSequence>& subsequences) {
    RawPartition out;
    if (subsequences.empty()) return out;
    const SignedSequence& first = subsequences.front();
    if (first.empty()) {
        for (size_t t = 1; t < subsequences.size(); ++t)
            if (!subsequences[t].empty())
                throw input_error("subsequences carry different id sets");
        return out;
    }

    int max_id = 0;
    for (SignedMarker m : first) max_id = std::max(max_id, std::abs(m));
    const size_t d = subsequences.size();
    std::vector<MapIndex> idx(d);
    for (size_t t = 0; t < d; ++t) {
        if (subsequences[t].size() != first.size())
            throw input_error("subsequences carry different id sets");
        for (SignedMarker m : subsequences[t])
            if (std::abs(m) > max_id)
                throw input_error("subsequences carry different id sets");
        idx[t] = index_subsequence(subsequences[t], max_id);
    }
    for (SignedMarker m : first)
        for (size_t t = 1; t < d; ++t)
            if (idx[t].pos[std::abs(m)] < 0)
                throw input_error("subsequences carry different id sets");

    const int len = static_cast<int>(first.size());
    const MapIndex& base = idx[0];
    int i = 0;
    std::vector<char> fwd(d), rev(d);
    while (i < len) {
        const int a = std::abs(first[i]);
        for (size_t t = 0; t < d; ++t) {
            const int s1 = base.sign[a];
            fwd[t] = idx[t].sign[a] == s1;
            rev[t] = idx[t].sign[a] == -s1;
        }
        int end = i;  // inclusive index of the last marker of the block
        for (int j = i + 1; j < len; ++j) {
            const int prev = std::abs(first[j - 1]);
            const int cur = std::abs(first[j]);
            bool ok = true;
            for (size_t t = 0; t < d; ++t) {
                const int pp = idx[t].pos[prev];
                const int pc = idx[t].pos[cur];
                const int s1 = base.sign[cur];
                fwd[t] = fwd[t] && pc == pp + 1 && idx[t].sign[cur] == s1;
                rev[t] = rev[t] && pc == pp - 1 && idx[t].sign[cur] == -s1;
                if (!fwd[t] && !rev[t]) ok = false;
            }
            if (!ok) break;
            end = j;
        }
        Strip block(first.begin() + i, first.begin() + end + 1);
        if (block.size() < 2) out.feasible = false;
        out.blocks.push_back(std::move(block));
        i = end + 1;
    }
    return out;
}

std::optional<StripPartition> strip_partition(
    const std::vector<SignedSequence>& subsequences) {
    RawPartition raw = raw_strip_partition(subsequences);
    if (!raw.feasible) return std::nullopt;
    StripPartition partition;
    partition.strips = std::move(raw.blocks);
    return partition;
}

int max_gap(const Instance& instance, const IdSet& kept,
            const StripPartition& partition) {
    (void)kept;
    int worst = 0;
    for (const auto& map : instance.maps) {
        std::vector<int> orig_pos(instance.n + 1, -1);
        for (int p = 0; p < static_cast<int>(map.size()); ++p)
            orig_pos[std::abs(map[p])] = p;
        for (const auto& strip : partition.strips) {
            std::vector<int> positions;
            positions.reserve(strip.size());
            for (SignedMarker m : strip) positions.push_back(orig_pos[std::abs(m)]);
            std::sort(positions.begin(), positions.end());
            for (size_t k = 1; k < positions.size(); ++k)
                worst = std::max(worst, positions[k] - positions[k - 1] - 1);
        }
    }
    return worst;
}

std::optional<Solution> evaluate(const Instance& instance, const IdSet& kept,
                                 const ObjectiveSpec& objective) {
    (void)objective;
    IdSet ids = normalize_id_set(kept, instance.n);
    auto subs = induced_subsequences(instance, ids);
    auto partition = strip_partition(subs);
    if (!partition) return std::nullopt;
    if (instance.delta && max_gap(instance, ids, *partition) > *instance.delta)
        return std::nullopt;
    Solution sol;
    sol.kept = std::move(ids);
    sol.strips = partition->strips;
    sol.length_value = partition->total_length();
    sol.strip_count = static_cast<int>(partition->strips.size());
    sol.adjacency_value = sol.length_value - sol.strip_count;
    sol.deleted_value = instance.n - sol.length_value;
    return sol;
}

namespace {

std::vector<Strip> sorted_strips(std::vector<Strip> strips) {
    std::sort(strips.begin(), strips.end());
    return strips;
}

}  // namespace

VerificationReport verify(const Instance& instance, const Solution& claimed) {
    VerificationReport report;
    IdSet ids;
    try {
        ids = normalize_id_set(claimed.kept, instance.n);
    } catch (const input_error& e) {
        report.fail(std::string("kept set invalid: ") + e.what());
        return report;
    }
    if (ids.size() != claimed.kept.size())
        report.fail("kept set contains duplicate ids");

    auto subs = induced_subsequences(instance, ids);
    auto partition = strip_partition(subs);
    if (!partition) {
        report.fail("kept set is infeasible: its maximal partition strands a lone marker");
        return report;
    }
    if (instance.delta) {
        const int gap = max_gap(instance, ids, *partition);
        if (gap > *instance.delta)
            report.fail("gap bound violated: max gap " + std::to_string(gap) +
                        " > delta " + std::to_string(*instance.delta));
    }
    if (sorted_strips(partition->strips) != sorted_strips(claimed.strips))
        report.fail("strip list does not match the recomputed partition");

    const int l = partition->total_length();
    const int k = static_cast<int>(partition->strips.size());
    if (claimed.length_value != l)
        report.fail("length mismatch: claimed " + std::to_string(claimed.length_value) +
                    ", recomputed " + std::to_string(l));
    if (claimed.strip_count != k)
        report.fail("strip count mismatch: claimed " + std::to_string(claimed.strip_count) +
                    ", recomputed " + std::to_string(k));
    if (claimed.adjacency_value != l - k)
        report.fail("adjacency mismatch: claimed " + std::to_string(claimed.adjacency_value) +
                    ", recomputed " + std::to_string(l - k));
    if (claimed.deleted_value != instance.n - l)
        report.fail("deleted-count mismatch: claimed " + std::to_string(claimed.deleted_value) +
                    ", recomputed " + std::to_string(instance.n - l));
    return report;
}

}  // namespace msr
