#pragma once

// Constructive canonical forms for the gadget instances, plus canonical-form
// verifiers for all four artifact kinds.  Canonicalization never decreases
// the total strip length and is idempotent.

#include "msr/core.hpp"
#include "msr/reductions.hpp"

#include <utility>

namespace msr {

enum class CanonicalOp { cut, delete_lone, insert_pair, shift };

std::string canonical_op_name(CanonicalOp op);

struct CanonicalReport {
    int input_length = 0;
    int output_length = 0;
    std::vector<CanonicalOp> operations_applied;
    std::vector<std::pair<std::string, bool>> conditions_satisfied;

    bool all_conditions_hold() const {
        for (const auto& [name, ok] : conditions_satisfied)
            if (!ok) return false;
        return true;
    }
};

// Three-map gadget form: every strip is a vertex pair or a dummy pair, and
// all n dummy pairs are strips.
std::pair<Solution, CanonicalReport> canonicalize_msr3(
    const ReductionArtifact& artifact, const Solution& solution);

// Two-map gadget form: every strip is a pair; both dummy pairs, all clause
// pairs and all variable pairs are strips; at most one literal pair per
// clause is a strip; per variable either both true pairs or both false
// pairs are strips.
std::pair<Solution, CanonicalReport> canonicalize_msr2(
    const ReductionArtifact& artifact, const Solution& solution);

// Per-condition verifier.  For mis_msr4 / ddm_msr artifacts canonical form
// is automatic (every strip is an index-matched pair); the checker simply
// reports it.
CanonicalReport check_canonical(const ReductionArtifact& artifact,
                                const Solution& solution);

}  // namespace msr
