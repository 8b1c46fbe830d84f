#include "msr/io.hpp"

#include "msr/exact.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace msr {

Rng::Rng(std::uint64_t seed) : state(seed) {}

std::uint64_t Rng::next() {
    // splitmix64: stable everywhere, good enough for test-instance sampling.
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

int Rng::below(int bound) {
    if (bound <= 0) throw internal_error("rng bound must be positive");
    return static_cast<int>(next() % static_cast<std::uint64_t>(bound));
}

// ---------------------------------------------------------------------------
// Tokenized line reader with line/column diagnostics.
// ---------------------------------------------------------------------------

namespace {

struct LineReader {
    std::istream& in;
    std::string filename;
    int line_no = 0;

    LineReader(std::istream& stream, std::string name)
        : in(stream), filename(std::move(name)) {}

    [[noreturn]] void fail(int column, const std::string& what) const {
        throw input_error(filename + ":" + std::to_string(line_no) + ":" +
                          std::to_string(column) + ": " + what);
    }

    // Next non-comment, non-blank line; false at end of input.
    bool next(std::string* line) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto first = raw.find_first_not_of(" \t\r");
            if (first == std::string::npos || raw[first] == '#') continue;
            *line = raw;
            return true;
        }
        return false;
    }
};

struct TokenLine {
    const LineReader& reader;
    std::string text;
    size_t cursor = 0;

    TokenLine(const LineReader& r, std::string t) : reader(r), text(std::move(t)) {}

    std::optional<std::pair<std::string, int>> token() {
        while (cursor < text.size() &&
               (text[cursor] == ' ' || text[cursor] == '\t' || text[cursor] == '\r'))
            ++cursor;
        if (cursor >= text.size()) return std::nullopt;
        const size_t start = cursor;
        while (cursor < text.size() && text[cursor] != ' ' && text[cursor] != '\t' &&
               text[cursor] != '\r')
            ++cursor;
        return std::make_pair(text.substr(start, cursor - start),
                              static_cast<int>(start + 1));
    }

    int integer(const std::string& what) {
        auto tok = token();
        if (!tok) reader.fail(static_cast<int>(text.size() + 1),
                              "expected " + what);
        try {
            size_t used = 0;
            const int value = std::stoi(tok->first, &used);
            if (used != tok->first.size()) throw std::invalid_argument("");
            return value;
        } catch (const std::exception&) {
            reader.fail(tok->second, "expected an integer for " + what +
                                         ", got '" + tok->first + "'");
        }
    }

    void expect_end() {
        auto tok = token();
        if (tok) reader.fail(tok->second, "unexpected trailing token '" + tok->first + "'");
    }
};

std::string join_ints(const std::vector<int>& values) {
    std::string out;
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Instance files.
// ---------------------------------------------------------------------------

Instance parse_instance(std::istream& in, const std::string& filename) {
    LineReader reader(in, filename);
    std::string line;
    if (!reader.next(&line)) reader.fail(1, "missing MSR header");
    TokenLine header(reader, line);
    auto tag = header.token();
    if (!tag || tag->first != "MSR")
        reader.fail(tag ? tag->second : 1, "expected 'MSR <d> <n>' header");
    const int d = header.integer("map count d");
    const int n = header.integer("marker count n");
    std::optional<int> delta;
    if (auto extra = header.token()) {
        if (extra->first.rfind("delta=", 0) != 0)
            reader.fail(extra->second, "expected 'delta=<k>', got '" + extra->first + "'");
        try {
            delta = std::stoi(extra->first.substr(6));
        } catch (const std::exception&) {
            reader.fail(extra->second, "bad delta value");
        }
        header.expect_end();
    }
    if (d < 2) reader.fail(1, "d must be at least 2");
    if (n < 0) reader.fail(1, "n must be non-negative");

    std::vector<SignedSequence> maps;
    for (int t = 0; t < d; ++t) {
        if (!reader.next(&line))
            reader.fail(1, "expected " + std::to_string(d) + " map lines, got " +
                               std::to_string(t));
        TokenLine row(reader, line);
        SignedSequence map;
        for (int i = 0; i < n; ++i)
            map.push_back(row.integer("marker " + std::to_string(i + 1)));
        row.expect_end();
        maps.push_back(std::move(map));
    }
    try {
        return Instance::make(std::move(maps), delta);
    } catch (const input_error& e) {
        reader.fail(1, e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return parse_instance(in, path);
}

std::string serialize_instance(const Instance& instance) {
    std::string out = "MSR " + std::to_string(instance.d()) + " " +
                      std::to_string(instance.n);
    if (instance.delta) out += " delta=" + std::to_string(*instance.delta);
    out += '\n';
    for (const auto& map : instance.maps) out += join_ints(map) + '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Solution files.
// ---------------------------------------------------------------------------

Solution parse_solution(std::istream& in, const std::string& filename) {
    LineReader reader(in, filename);
    Solution sol;
    bool have_keep = false, have_value = false;
    std::string line;
    while (reader.next(&line)) {
        TokenLine row(reader, line);
        auto tag = row.token();
        if (tag->first == "KEEP") {
            if (have_keep) reader.fail(tag->second, "duplicate KEEP line");
            have_keep = true;
            while (auto tok = row.token()) {
                try {
                    sol.kept.push_back(std::stoi(tok->first));
                } catch (const std::exception&) {
                    reader.fail(tok->second, "bad id '" + tok->first + "'");
                }
            }
        } else if (tag->first == "STRIP") {
            Strip strip;
            while (auto tok = row.token()) {
                try {
                    strip.push_back(std::stoi(tok->first));
                } catch (const std::exception&) {
                    reader.fail(tok->second, "bad marker '" + tok->first + "'");
                }
            }
            if (strip.size() < 2)
                reader.fail(tag->second, "a strip needs at least two markers");
            sol.strips.push_back(std::move(strip));
        } else if (tag->first == "VALUE") {
            if (have_value) reader.fail(tag->second, "duplicate VALUE line");
            have_value = true;
            while (auto tok = row.token()) {
                const auto eq = tok->first.find('=');
                if (eq == std::string::npos)
                    reader.fail(tok->second, "expected key=value, got '" + tok->first + "'");
                const std::string key = tok->first.substr(0, eq);
                int value = 0;
                try {
                    value = std::stoi(tok->first.substr(eq + 1));
                } catch (const std::exception&) {
                    reader.fail(tok->second, "bad value in '" + tok->first + "'");
                }
                if (key == "length") sol.length_value = value;
                else if (key == "adjacency") sol.adjacency_value = value;
                else if (key == "deleted") sol.deleted_value = value;
                else reader.fail(tok->second, "unknown VALUE key '" + key + "'");
            }
        } else {
            reader.fail(tag->second, "unknown line tag '" + tag->first + "'");
        }
    }
    if (!have_keep) reader.fail(1, "missing KEEP line");
    if (!have_value) reader.fail(1, "missing VALUE line");
    sol.strip_count = static_cast<int>(sol.strips.size());
    return sol;
}

Solution load_solution(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return parse_solution(in, path);
}

std::string serialize_solution(const Solution& solution) {
    std::string out = "KEEP " + join_ints(solution.kept) + '\n';
    for (const auto& strip : solution.strips) out += "STRIP " + join_ints(strip) + '\n';
    out += "VALUE length=" + std::to_string(solution.length_value) +
           " adjacency=" + std::to_string(solution.adjacency_value) +
           " deleted=" + std::to_string(solution.deleted_value) + '\n';
    return out;
}

// ---------------------------------------------------------------------------
// Source files.
// ---------------------------------------------------------------------------

SourceFile parse_source(std::istream& in, const std::string& filename) {
    LineReader reader(in, filename);
    std::string line;
    if (!reader.next(&line)) reader.fail(1, "missing source header");
    TokenLine header(reader, line);
    auto tag = header.token();
    SourceFile source;

    if (tag->first == "GRAPH") {
        const int n = header.integer("vertex count");
        const int m = header.integer("edge count");
        header.expect_end();
        std::vector<std::pair<int, int>> edges;
        for (int e = 0; e < m; ++e) {
            if (!reader.next(&line)) reader.fail(1, "missing edge line");
            TokenLine row(reader, line);
            const int a = row.integer("edge endpoint");
            const int b = row.integer("edge endpoint");
            row.expect_end();
            edges.emplace_back(a, b);
        }
        try {
            source.problem = Graph::make(n, std::move(edges));
        } catch (const input_error& e) {
            reader.fail(1, e.what());
        }
        // Optional pinned decomposition.
        std::vector<std::vector<std::vector<int>>> forests;
        while (reader.next(&line)) {
            TokenLine row(reader, line);
            auto ftag = row.token();
            if (ftag->first != "FOREST")
                reader.fail(ftag->second, "expected FOREST line, got '" + ftag->first + "'");
            const int t = row.integer("forest index");
            if (t < 1) reader.fail(ftag->second, "forest index must be positive");
            std::vector<int> path;
            while (auto tok = row.token()) {
                try {
                    path.push_back(std::stoi(tok->first));
                } catch (const std::exception&) {
                    reader.fail(tok->second, "bad vertex '" + tok->first + "'");
                }
            }
            if (path.size() < 2) reader.fail(ftag->second, "path needs two vertices");
            if (static_cast<size_t>(t) > forests.size()) forests.resize(t);
            forests[t - 1].push_back(std::move(path));
        }
        if (!forests.empty()) {
            LinearForestDecomposition decomposition;
            for (auto& paths : forests) {
                LinearForest forest;
                forest.paths = std::move(paths);
                decomposition.forests.push_back(std::move(forest));
            }
            try {
                validate_decomposition(source.graph(), decomposition);
            } catch (const input_error& e) {
                reader.fail(1, e.what());
            }
            source.forests = std::move(decomposition);
        }
        return source;
    }

    if (tag->first == "SAT32") {
        const int n = header.integer("variable count");
        const int m = header.integer("clause count");
        header.expect_end();
        std::vector<std::vector<int>> clauses;
        for (int j = 0; j < m; ++j) {
            if (!reader.next(&line)) reader.fail(1, "missing clause line");
            TokenLine row(reader, line);
            std::vector<int> clause;
            while (auto tok = row.token()) {
                try {
                    clause.push_back(std::stoi(tok->first));
                } catch (const std::exception&) {
                    reader.fail(tok->second, "bad literal '" + tok->first + "'");
                }
            }
            clauses.push_back(std::move(clause));
        }
        try {
            source.problem = CnfInstance::make(n, std::move(clauses));
        } catch (const input_error& e) {
            reader.fail(1, e.what());
        }
        return source;
    }

    if (tag->first == "DDM") {
        const int d = header.integer("dimension");
        if (d < 2) reader.fail(1, "dimension must be at least 2");
        std::vector<int> sizes;
        for (int i = 0; i < d; ++i) sizes.push_back(header.integer("vertex-set size"));
        const int m = header.integer("hyper-edge count");
        header.expect_end();
        std::vector<std::vector<int>> edges;
        for (int e = 0; e < m; ++e) {
            if (!reader.next(&line)) reader.fail(1, "missing hyper-edge line");
            TokenLine row(reader, line);
            std::vector<int> edge;
            for (int i = 0; i < d; ++i) edge.push_back(row.integer("coordinate"));
            row.expect_end();
            edges.push_back(std::move(edge));
        }
        try {
            source.problem = DdmInstance::make(d, std::move(sizes), std::move(edges));
        } catch (const input_error& e) {
            reader.fail(1, e.what());
        }
        return source;
    }

    reader.fail(tag->second, "unknown source tag '" + tag->first + "'");
}

SourceFile load_source(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open '" + path + "'");
    return parse_source(in, path);
}

std::string serialize_source(const SourceFile& source) {
    std::string out;
    if (source.is_graph()) {
        const Graph& g = source.graph();
        out = "GRAPH " + std::to_string(g.n_vertices) + " " +
              std::to_string(g.edges.size()) + '\n';
        for (auto [a, b] : g.edges)
            out += std::to_string(a) + " " + std::to_string(b) + '\n';
        if (source.forests)
            for (size_t t = 0; t < source.forests->forests.size(); ++t)
                for (const auto& path : source.forests->forests[t].paths)
                    out += "FOREST " + std::to_string(t + 1) + " " + join_ints(path) + '\n';
        return out;
    }
    if (source.is_cnf()) {
        const CnfInstance& cnf = source.cnf();
        out = "SAT32 " + std::to_string(cnf.n_vars) + " " +
              std::to_string(cnf.num_clauses()) + '\n';
        for (const auto& clause : cnf.clauses) out += join_ints(clause) + '\n';
        return out;
    }
    const DdmInstance& ddm = source.ddm();
    out = "DDM " + std::to_string(ddm.d);
    for (int s : ddm.set_sizes) out += " " + std::to_string(s);
    out += " " + std::to_string(ddm.num_edges()) + '\n';
    for (const auto& edge : ddm.edges) out += join_ints(edge) + '\n';
    return out;
}

ReductionArtifact artifact_from_source(ReductionKind kind, const SourceFile& source) {
    switch (kind) {
        case ReductionKind::mis_msr4:
        case ReductionKind::mis_msr3: {
            if (!source.is_graph())
                throw input_error("this reduction expects a GRAPH source");
            LinearForestDecomposition forests =
                source.forests ? *source.forests
                               : decompose_linear_forests(source.graph(), 2);
            return kind == ReductionKind::mis_msr4
                       ? reduce_mis_msr4(source.graph(), forests)
                       : reduce_mis_msr3(source.graph(), forests);
        }
        case ReductionKind::sat_msr2:
            if (!source.is_cnf())
                throw input_error("this reduction expects a SAT32 source");
            return reduce_sat_msr2(source.cnf());
        case ReductionKind::ddm_msr:
            if (!source.is_ddm())
                throw input_error("this reduction expects a DDM source");
            return reduce_ddm_msr(source.ddm());
    }
    throw internal_error("unknown reduction kind");
}

// ---------------------------------------------------------------------------
// Generators.
// ---------------------------------------------------------------------------

Graph gen_graph_maxdeg(int n, int max_degree, std::uint64_t seed) {
    if (n < 1) throw input_error("graph generator needs n >= 1");
    if (max_degree < 0 || max_degree > 4)
        throw input_error("graph generator supports max degree 0..4");
    Rng rng(seed * 0x9e3779b9ULL + 17);
    std::vector<std::pair<int, int>> candidates;
    for (int a = 1; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) candidates.emplace_back(a, b);
    rng.shuffle(candidates);
    std::vector<int> degree(n + 1, 0);
    std::vector<std::pair<int, int>> edges;
    for (auto [a, b] : candidates) {
        if (degree[a] >= max_degree || degree[b] >= max_degree) continue;
        if (!rng.coin()) continue;
        ++degree[a];
        ++degree[b];
        edges.emplace_back(a, b);
    }
    return Graph::make(n, std::move(edges));
}

CnfInstance gen_sat32(int n_vars, std::uint64_t seed) {
    if (n_vars < 2 || n_vars % 2 != 0)
        throw input_error("the 3-occurrence 2-literal generator needs an even n >= 2");
    const int m = 3 * n_vars / 2;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Rng rng(seed * 0x517cc1b7ULL + attempt);
        std::vector<int> slots;  // signed literals, 3 per variable
        for (int v = 1; v <= n_vars; ++v) {
            const bool two_positive = rng.coin();
            slots.push_back(v);
            slots.push_back(two_positive ? v : -v);
            slots.push_back(-v);
        }
        rng.shuffle(slots);
        std::vector<std::vector<int>> clauses;
        bool stuck = false;
        for (int j = 0; j < m && !stuck; ++j) {
            const int first = slots[2 * j];
            int partner = 2 * j + 1;
            while (partner < static_cast<int>(slots.size()) &&
                   std::abs(slots[partner]) == std::abs(first))
                ++partner;
            if (partner >= static_cast<int>(slots.size())) {
                stuck = true;
                break;
            }
            std::swap(slots[2 * j + 1], slots[partner]);
            clauses.push_back({first, slots[2 * j + 1]});
        }
        if (stuck) continue;
        try {
            return CnfInstance::make(n_vars, std::move(clauses));
        } catch (const input_error&) {
            continue;  // a variable landed twice in one clause pairing
        }
    }
    throw internal_error("formula generator failed to converge");
}

DdmInstance gen_ddm(int d, std::vector<int> set_sizes, int m, std::uint64_t seed) {
    long universe = 1;
    for (int s : set_sizes) {
        universe *= s;
        if (universe > 1'000'000) throw input_error("vertex-set product too large");
    }
    if (m < 1 || m > universe)
        throw input_error("cannot draw " + std::to_string(m) + " distinct hyper-edges");
    std::vector<std::vector<int>> all;
    std::vector<int> cur(d, 1);
    while (true) {
        all.push_back(cur);
        int i = d - 1;
        while (i >= 0 && cur[i] == set_sizes[i]) cur[i--] = 1;
        if (i < 0) break;
        ++cur[i];
    }
    Rng rng(seed * 0x2545f491ULL + 3);
    rng.shuffle(all);
    all.resize(m);
    std::sort(all.begin(), all.end());
    return DdmInstance::make(d, std::move(set_sizes), std::move(all));
}

Instance gen_random_permutation_instance(int d, int n, std::uint64_t seed,
                                         std::optional<int> delta,
                                         bool all_positive) {
    if (d < 2 || n < 1) throw input_error("need d >= 2 and n >= 1");
    Rng rng(seed * 0x632be5abULL + 7);
    std::vector<SignedSequence> maps;
    for (int t = 0; t < d; ++t) {
        SignedSequence map(n);
        for (int i = 0; i < n; ++i) map[i] = i + 1;
        rng.shuffle(map);
        if (!all_positive)
            for (int& marker : map)
                if (rng.coin()) marker = -marker;
        maps.push_back(std::move(map));
    }
    return Instance::make(std::move(maps), delta);
}

// ---------------------------------------------------------------------------
// Lemma-check harness.
// ---------------------------------------------------------------------------

std::string lemma_kind_name(LemmaKind kind) {
    switch (kind) {
        case LemmaKind::msr4: return "msr4";
        case LemmaKind::msr3: return "msr3";
        case LemmaKind::sat: return "sat";
        case LemmaKind::ddm: return "ddm";
    }
    throw internal_error("unknown lemma kind");
}

LemmaKind parse_lemma_kind(const std::string& name) {
    if (name == "msr4") return LemmaKind::msr4;
    if (name == "msr3") return LemmaKind::msr3;
    if (name == "sat") return LemmaKind::sat;
    if (name == "ddm") return LemmaKind::ddm;
    throw input_error("unknown lemma-check kind '" + name + "'");
}

namespace {

std::string describe_graph(const Graph& g) {
    std::string out = "GRAPH n=" + std::to_string(g.n_vertices) + " edges=";
    for (auto [a, b] : g.edges)
        out += "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    return out;
}

}  // namespace

LemmaCheckReport lemma_check(LemmaKind kind, const LemmaCheckParams& params) {
    LemmaCheckReport report;
    report.kind = kind;
    report.trials = params.trials;

    for (int trial = 0; trial < params.trials; ++trial) {
        Rng rng(params.seed + 1000003ULL * trial);
        try {
            switch (kind) {
                case LemmaKind::msr4:
                case LemmaKind::msr3: {
                    const int n = 1 + rng.below(params.max_n);
                    Graph graph = gen_graph_maxdeg(n, 3, rng.next());
                    auto forests = decompose_linear_forests(graph, 2);
                    auto artifact = kind == LemmaKind::msr4
                                        ? reduce_mis_msr4(graph, forests)
                                        : reduce_mis_msr3(graph, forests);
                    const int l = solve_exact(artifact.instance).length_value;
                    const int k = mis_oracle(graph).value;
                    const int expect =
                        kind == LemmaKind::msr4 ? 2 * k : 2 * (n + k);
                    if (l != expect)
                        report.failures.push_back(
                            describe_graph(graph) + ": gadget optimum " +
                            std::to_string(l) + " != " + std::to_string(expect));
                    break;
                }
                case LemmaKind::ddm: {
                    const int d = 2 + rng.below(2);
                    std::vector<int> sizes(d);
                    for (int& s : sizes) s = 1 + rng.below(3);
                    long universe = 1;
                    for (int s : sizes) universe *= s;
                    const int m =
                        1 + rng.below(std::min<long>(params.max_n, universe));
                    DdmInstance ddm = gen_ddm(d, sizes, m, rng.next());
                    auto artifact = reduce_ddm_msr(ddm);
                    const int l = solve_exact(artifact.instance).length_value;
                    const int k = ddm_oracle(ddm).value;
                    if (l != 2 * k)
                        report.failures.push_back(
                            "DDM d=" + std::to_string(d) + " m=" + std::to_string(m) +
                            " seed-trial=" + std::to_string(trial) + ": optimum " +
                            std::to_string(l) + " != " + std::to_string(2 * k));
                    break;
                }
                case LemmaKind::sat: {
                    int n = 2 + 2 * rng.below(std::max(1, params.max_n / 2));
                    CnfInstance cnf = gen_sat32(n, rng.next());
                    auto artifact = reduce_sat_msr2(cnf);
                    auto oracle = sat_oracle(cnf);
                    SourceWitness witness;
                    witness.assignment = oracle.witness.assignment;
                    Solution embedded = embed_source_solution(artifact, witness);
                    const int expect = 2 * (3 * cnf.n_vars + cnf.num_clauses() +
                                            oracle.value + 2);
                    if (embedded.length_value != expect) {
                        report.failures.push_back(
                            "SAT n=" + std::to_string(n) + ": embedded length " +
                            std::to_string(embedded.length_value) + " != " +
                            std::to_string(expect));
                        break;
                    }
                    // Extraction inequality on a few feasible solutions.
                    std::vector<Solution> samples{embedded};
                    SourceWitness all_false;
                    all_false.assignment.assign(cnf.n_vars, 0);
                    samples.push_back(embed_source_solution(artifact, all_false));
                    for (const Solution& sample : samples) {
                        auto extracted = extract_source_solution(artifact, sample);
                        const int bound = sample.length_value / 2 -
                                          3 * cnf.n_vars - cnf.num_clauses() - 2;
                        if (extracted.value < bound)
                            report.failures.push_back(
                                "SAT n=" + std::to_string(n) +
                                ": extraction bound violated (" +
                                std::to_string(extracted.value) + " < " +
                                std::to_string(bound) + ")");
                    }
                    break;
                }
            }
        } catch (const std::exception& e) {
            report.failures.push_back(std::string("trial ") + std::to_string(trial) +
                                      " raised: " + e.what());
        }
    }
    report.passes = report.trials - static_cast<int>(report.failures.size());
    if (kind == LemmaKind::sat)
        report.notes.push_back(
            "sat gadgets exceed exhaustive search; checked the constructive "
            "lower bound via embedding plus the extraction inequality instead "
            "of the exact optimum");
    return report;
}

}  // namespace msr
