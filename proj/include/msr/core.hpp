#pragma once

// Core model for maximal strip recovery: genomic maps as signed permutations,
// kept-marker subsets, strip partitions, and the objective family
// (total strip length / adjacency count, and the deleted-marker complement).

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msr {

// Thrown on malformed user input (bad ids, inconsistent maps, parse errors).
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an internal consistency check fails; indicates a bug.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

// A marker is a signed id: the integer m encodes id |m| with orientation
// sign(m).  Ids are 1-based; 0 is never a valid marker.
using SignedMarker = int;
using SignedSequence = std::vector<SignedMarker>;
using IdSet = std::vector<int>;  // sorted, unique, 1-based ids

enum class ObjectiveMode { length, adjacency };
enum class Variant { msr, cmsr };

struct ObjectiveSpec {
    ObjectiveMode mode = ObjectiveMode::length;
    Variant variant = Variant::msr;
};

// d genomic maps over the marker universe 1..n.  Every map is a signed
// permutation of 1..n.  `delta` (if set) bounds the number of deleted
// markers allowed between adjacent strip markers in each original map.
struct Instance {
    std::vector<SignedSequence> maps;
    int n = 0;
    std::optional<int> delta;
    bool all_positive = false;

    int d() const { return static_cast<int>(maps.size()); }

    // Validates (d >= 2, each map a signed permutation of 1..n) and derives
    // `all_positive`.  Throws input_error on violation.
    static Instance make(std::vector<SignedSequence> maps,
                         std::optional<int> delta = std::nullopt);

    Instance with_delta(std::optional<int> new_delta) const {
        Instance copy = *this;
        copy.delta = new_delta;
        return copy;
    }
};

// A strip recorded in map-1 orientation; always length >= 2.
using Strip = SignedSequence;

struct StripPartition {
    std::vector<Strip> strips;
    int total_length() const;
};

struct Solution {
    IdSet kept;
    std::vector<Strip> strips;
    int length_value = 0;    // l = |kept| = sum of strip lengths
    int strip_count = 0;
    int adjacency_value = 0; // l - strip_count
    int deleted_value = 0;   // x = n - l

    int objective_value(const ObjectiveSpec& objective) const {
        if (objective.mode == ObjectiveMode::adjacency) return adjacency_value;
        return objective.variant == Variant::cmsr ? deleted_value : length_value;
    }
};

struct VerificationReport {
    bool passed = true;
    std::vector<std::string> issues;
    void fail(std::string why) {
        passed = false;
        issues.push_back(std::move(why));
    }
};

// Internal form of the left-greedy partition: blocks may have length 1
// (which makes the kept set infeasible).  The canonicalizer needs the raw
// blocks to locate lone markers.
struct RawPartition {
    std::vector<Strip> blocks;
    bool feasible = true;  // no length-1 block
};

IdSet normalize_id_set(std::vector<int> ids, int n);

// Restriction of each map to the kept ids, order and signs preserved.
std::vector<SignedSequence> induced_subsequences(const Instance& instance,
                                                 const IdSet& kept);

RawPartition raw_strip_partition(const std::vector<SignedSequence>& subsequences);

// Left-greedy maximal partition of subsequence 1: repeatedly emit the longest
// block starting at the current position that appears contiguously
// (identically, or reversed with all signs flipped) in every other
// subsequence.  nullopt if some emitted block has length 1.
std::optional<StripPartition> strip_partition(
    const std::vector<SignedSequence>& subsequences);

// Maximum over all maps and all adjacent same-strip marker pairs of the
// number of deleted markers strictly between them in that original map.
int max_gap(const Instance& instance, const IdSet& kept,
            const StripPartition& partition);

// Builds subsequences, partitions, checks the delta bound if set, and fills
// every Solution field.  nullopt when the kept set is infeasible.
std::optional<Solution> evaluate(const Instance& instance, const IdSet& kept,
                                 const ObjectiveSpec& objective = {});

// Recomputes everything from claimed.kept and reports disagreements
// field by field.  Never throws on a bad claim; all failures are entries.
VerificationReport verify(const Instance& instance, const Solution& claimed);

}  // namespace msr
