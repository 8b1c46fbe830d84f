#pragma once

// Text formats (instances, solutions, source problems), seeded random
// generators, and the lemma-check harness.

#include "msr/core.hpp"
#include "msr/reductions.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace msr {

// Deterministic across platforms: raw mt19937_64 draws with modulo
// reduction, never implementation-defined distributions.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed);
    std::uint64_t next();
    int below(int bound);  // uniform-ish in [0, bound)
    bool coin() { return below(2) == 1; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (int i = static_cast<int>(items.size()) - 1; i > 0; --i)
            std::swap(items[i], items[below(i + 1)]);
    }
};

// --- instance files --------------------------------------------------------
// Header "MSR <d> <n>" with optional "delta=<k>", then d lines of n signed
// integers.  '#' starts a comment line.

Instance parse_instance(std::istream& in, const std::string& filename = "<input>");
Instance load_instance(const std::string& path);
std::string serialize_instance(const Instance& instance);

// --- solution files --------------------------------------------------------
// "KEEP <ids...>", "STRIP <signed ids...>" per strip (map-1 order), and
// "VALUE length=<l> adjacency=<a> deleted=<x>".

Solution parse_solution(std::istream& in, const std::string& filename = "<input>");
Solution load_solution(const std::string& path);
std::string serialize_solution(const Solution& solution);

// --- source files ----------------------------------------------------------
// "GRAPH <n> <m>" + m edge lines, optionally followed by "FOREST <t> <path>"
// lines pinning a linear-forest decomposition;
// "SAT32 <n> <m>" + m clause lines of signed variable ids;
// "DDM <d> <n1..nd> <m>" + m hyper-edge lines.

struct SourceFile {
    std::variant<Graph, CnfInstance, DdmInstance> problem;
    std::optional<LinearForestDecomposition> forests;  // GRAPH only

    const Graph& graph() const { return std::get<Graph>(problem); }
    const CnfInstance& cnf() const { return std::get<CnfInstance>(problem); }
    const DdmInstance& ddm() const { return std::get<DdmInstance>(problem); }
    bool is_graph() const { return std::holds_alternative<Graph>(problem); }
    bool is_cnf() const { return std::holds_alternative<CnfInstance>(problem); }
    bool is_ddm() const { return std::holds_alternative<DdmInstance>(problem); }
};

SourceFile parse_source(std::istream& in, const std::string& filename = "<input>");
SourceFile load_source(const std::string& path);
std::string serialize_source(const SourceFile& source);

// Builds the artifact a source file describes, decomposing into linear
// forests when the file does not pin them.
ReductionArtifact artifact_from_source(ReductionKind kind, const SourceFile& source);

// --- generators -------------------------------------------------------------

Graph gen_graph_maxdeg(int n, int max_degree, std::uint64_t seed);
CnfInstance gen_sat32(int n_vars, std::uint64_t seed);
DdmInstance gen_ddm(int d, std::vector<int> set_sizes, int m, std::uint64_t seed);
Instance gen_random_permutation_instance(int d, int n, std::uint64_t seed,
                                         std::optional<int> delta = std::nullopt,
                                         bool all_positive = false);

// --- lemma-check harness ----------------------------------------------------

enum class LemmaKind { msr4, msr3, sat, ddm };

std::string lemma_kind_name(LemmaKind kind);
LemmaKind parse_lemma_kind(const std::string& name);

struct LemmaCheckParams {
    int trials = 10;
    std::uint64_t seed = 1;
    int max_n = 6;  // vertices / variables / hyper-edges, kind-dependent
};

struct LemmaCheckReport {
    LemmaKind kind;
    int trials = 0;
    int passes = 0;
    std::vector<std::string> failures;  // serialized counterexamples
    std::vector<std::string> notes;

    bool ok() const { return failures.empty(); }
};

// Per random source instance, builds the gadget, computes the source optimum
// by oracle and the gadget optimum by exact search, and asserts the
// construction's length identity.  The sat kind instead checks the
// constructive lower bound via embedding plus the extraction inequality,
// because its smallest gadgets already exceed exhaustive search.
LemmaCheckReport lemma_check(LemmaKind kind, const LemmaCheckParams& params);

}  // namespace msr
