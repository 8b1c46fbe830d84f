#pragma once

// Source problems (bounded-degree graphs, 3SAT-2 formulas, d-dimensional
// matching), linear-forest decomposition, the four gadget constructions with
// their marker legends, forward solution embeddings, back-maps, and
// brute-force source oracles.

#include "msr/core.hpp"

#include <variant>
#include <vector>

namespace msr {

struct Graph {
    int n_vertices = 0;
    std::vector<std::pair<int, int>> edges;  // normalized a < b, sorted

    static Graph make(int n_vertices, std::vector<std::pair<int, int>> edges);
    int max_degree() const;
    bool has_edge(int a, int b) const;
    std::vector<int> degrees() const;
};

// One linear forest, stored as its vertex-disjoint paths.  Paths are kept in
// canonical form: each oriented from its smaller endpoint, listed by
// ascending minimum vertex id.
struct LinearForest {
    std::vector<std::vector<int>> paths;  // each path: >= 2 vertices

    std::vector<std::pair<int, int>> edge_set() const;
    bool touches(int vertex) const;
};

struct LinearForestDecomposition {
    std::vector<LinearForest> forests;
};

// Validates that the forests partition the graph's edges and that every
// forest is a union of vertex-disjoint paths.  Throws input_error otherwise.
void validate_decomposition(const Graph& graph,
                            const LinearForestDecomposition& decomposition);

// Backtracking edge assignment with degree/acyclicity pruning.  Guaranteed
// to succeed with max_forests = 2 for max degree <= 3 and with 3 for degree
// 4; throws input_error when no decomposition exists or the budget runs out.
LinearForestDecomposition decompose_linear_forests(const Graph& graph,
                                                   int max_forests);

// Each variable occurs in exactly three clauses (never all-positive or
// all-negative); each clause holds q literals of q distinct variables.
struct CnfInstance {
    int n_vars = 0;
    std::vector<std::vector<int>> clauses;  // literal: +var or -var
    int q = 0;

    static CnfInstance make(int n_vars, std::vector<std::vector<int>> clauses);
    int num_clauses() const { return static_cast<int>(clauses.size()); }
    int satisfied_count(const std::vector<char>& assignment) const;
};

struct DdmInstance {
    int d = 0;
    std::vector<int> set_sizes;
    std::vector<std::vector<int>> edges;  // each of length d, 1-based coords

    static DdmInstance make(int d, std::vector<int> set_sizes,
                            std::vector<std::vector<int>> edges);
    int num_edges() const { return static_cast<int>(edges.size()); }
    bool disjoint(int e1, int e2) const;
};

enum class ReductionKind { mis_msr4, mis_msr3, sat_msr2, ddm_msr };

std::string reduction_kind_name(ReductionKind kind);
ReductionKind parse_reduction_kind(const std::string& name);

struct MarkerRole {
    enum class Kind { vertex, dummy, true_mark, false_mark, clause, literal,
                      variable, edge };
    Kind kind;
    int index1 = 0;  // vertex / variable / clause / edge index
    int index2 = 0;  // copy index (true/false), literal slot, otherwise 0
    bool left = true;

    std::string describe() const;
};

struct ReductionArtifact {
    ReductionKind kind;
    Instance instance;
    std::vector<MarkerRole> legend;  // by marker id; legend[0] unused
    std::variant<Graph, CnfInstance, DdmInstance> source;
    LinearForestDecomposition forests;  // mis kinds only

    const Graph& graph() const { return std::get<Graph>(source); }
    const CnfInstance& cnf() const { return std::get<CnfInstance>(source); }
    const DdmInstance& ddm() const { return std::get<DdmInstance>(source); }

    // Inverse legend lookup; throws internal_error if the role is absent.
    int role_id(const MarkerRole& role) const;
};

ReductionArtifact reduce_mis_msr4(const Graph& graph,
                                  const LinearForestDecomposition& forests);
ReductionArtifact reduce_mis_msr3(const Graph& graph,
                                  const LinearForestDecomposition& forests);
ReductionArtifact reduce_sat_msr2(const CnfInstance& cnf);
ReductionArtifact reduce_ddm_msr(const DdmInstance& ddm);

// A solution to the source problem: `selected` holds an independent set /
// matching edge indices; `assignment` is per-variable for sat instances.
struct SourceWitness {
    std::vector<int> selected;
    std::vector<char> assignment;
};

// Builds the canonical feasible solution the construction guarantees:
// length 2k (mis_msr4, ddm_msr), 2(n + k) (mis_msr3), or 2(3n + m + k + 2)
// (sat_msr2, k = clauses satisfied; per satisfied clause the literal pair of
// the lowest-slot true literal is chosen).
Solution embed_source_solution(const ReductionArtifact& artifact,
                               const SourceWitness& witness);

struct ExtractResult {
    SourceWitness witness;
    int value = 0;               // k: |IS|, satisfied clauses, |matching|
    std::vector<int> cover;      // cmsr back-map only
    int cover_size = 0;          // c = |cover|
    Solution canonicalized;      // the solution the witness was read from
};

// Back-map g: canonicalizes first where required (mis_msr3, sat_msr2), then
// reads the source solution off the pair strips.  Guarantees k >= l/2
// (mis_msr4, ddm), k >= l/2 - n (msr3), k >= l/2 - 3n - m - 2 (sat), and for
// variant cmsr on mis_msr3 a vertex cover with c <= x/2.
ExtractResult extract_source_solution(const ReductionArtifact& artifact,
                                      const Solution& solution,
                                      Variant variant = Variant::msr);

struct OracleResult {
    int value = 0;
    SourceWitness witness;
};

// Exhaustive source oracles (deterministic witnesses: smallest indicator
// vector among optima).  Size guard ~22 indices.
OracleResult mis_oracle(const Graph& graph);
OracleResult vc_oracle(const Graph& graph);
OracleResult sat_oracle(const CnfInstance& cnf);
OracleResult ddm_oracle(const DdmInstance& ddm);

}  // namespace msr
