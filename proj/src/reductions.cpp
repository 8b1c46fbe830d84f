#include "msr/reductions.hpp"

#include "msr/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

namespace msr {

namespace {
// Literal (signed variable) sitting in slot t of clause j of a sat artifact.
int literal_of_slot(const ReductionArtifact& artifact, int clause, int slot);
}  // namespace

// ---------------------------------------------------------------------------
// Source types.
// ---------------------------------------------------------------------------

Graph Graph::make(int n_vertices, std::vector<std::pair<int, int>> edges) {
    if (n_vertices < 0) throw input_error("negative vertex count");
    for (auto& [a, b] : edges) {
        if (a == b) throw input_error("self-loop at vertex " + std::to_string(a));
        if (a < 1 || b < 1 || a > n_vertices || b > n_vertices)
            throw input_error("edge endpoint outside 1.." + std::to_string(n_vertices));
        if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw input_error("duplicate edge");
    Graph g;
    g.n_vertices = n_vertices;
    g.edges = std::move(edges);
    return g;
}

std::vector<int> Graph::degrees() const {
    std::vector<int> deg(n_vertices + 1, 0);
    for (auto [a, b] : edges) {
        ++deg[a];
        ++deg[b];
    }
    return deg;
}

int Graph::max_degree() const {
    auto deg = degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

bool Graph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

std::vector<std::pair<int, int>> LinearForest::edge_set() const {
    std::vector<std::pair<int, int>> out;
    for (const auto& path : paths)
        for (size_t i = 1; i < path.size(); ++i) {
            int a = path[i - 1], b = path[i];
            if (a > b) std::swap(a, b);
            out.emplace_back(a, b);
        }
    std::sort(out.begin(), out.end());
    return out;
}

bool LinearForest::touches(int vertex) const {
    for (const auto& path : paths)
        for (int v : path)
            if (v == vertex) return true;
    return false;
}

void validate_decomposition(const Graph& graph,
                            const LinearForestDecomposition& decomposition) {
    std::vector<std::pair<int, int>> all;
    for (const auto& forest : decomposition.forests) {
        std::vector<char> used(graph.n_vertices + 1, 0);
        for (const auto& path : forest.paths) {
            if (path.size() < 2)
                throw input_error("forest path needs at least two vertices");
            for (int v : path) {
                if (v < 1 || v > graph.n_vertices)
                    throw input_error("forest path vertex outside the graph");
                if (used[v])
                    throw input_error("forest paths share vertex " + std::to_string(v));
                used[v] = 1;
            }
            for (size_t i = 1; i < path.size(); ++i)
                if (!graph.has_edge(path[i - 1], path[i]))
                    throw input_error("forest path uses a non-edge");
        }
        auto forest_edges = forest.edge_set();
        all.insert(all.end(), forest_edges.begin(), forest_edges.end());
    }
    std::sort(all.begin(), all.end());
    if (all != graph.edges)
        throw input_error("forests do not partition the edge set");
}

namespace {

LinearForest canonical_forest(const std::vector<std::pair<int, int>>& edges,
                              int n_vertices) {
    std::vector<std::vector<int>> adj(n_vertices + 1);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    LinearForest forest;
    std::vector<char> visited(n_vertices + 1, 0);
    for (int v = 1; v <= n_vertices; ++v) {
        if (visited[v] || adj[v].size() != 1) continue;  // path endpoints only
        std::vector<int> path{v};
        visited[v] = 1;
        int cur = v, prev = 0;
        while (true) {
            int next = -1;
            for (int u : adj[cur])
                if (u != prev) {
                    next = u;
                    break;
                }
            if (next < 0) break;
            visited[next] = 1;
            path.push_back(next);
            prev = cur;
            cur = next;
        }
        // Endpoint scan runs in ascending order, so the path starts at the
        // smaller endpoint already; normalize anyway.
        if (path.back() < path.front()) std::reverse(path.begin(), path.end());
        forest.paths.push_back(std::move(path));
    }
    std::sort(forest.paths.begin(), forest.paths.end(),
              [](const auto& a, const auto& b) {
                  return *std::min_element(a.begin(), a.end()) <
                         *std::min_element(b.begin(), b.end());
              });
    return forest;
}

struct ForestState {
    std::vector<int> degree;
    std::vector<int> parent;  // union-find, no path compression

    explicit ForestState(int n) : degree(n + 1, 0), parent(n + 1) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int v) const {
        while (parent[v] != v) v = parent[v];
        return v;
    }
};

}  // namespace

LinearForestDecomposition decompose_linear_forests(const Graph& graph,
                                                   int max_forests) {
    if (max_forests < 1) throw input_error("need at least one forest");
    const int m = static_cast<int>(graph.edges.size());
    std::vector<ForestState> forests(max_forests, ForestState(graph.n_vertices));
    std::vector<int> assignment(m, -1);
    long budget = 50'000'000;
    bool exhausted = false;

    std::function<bool(int, int)> place = [&](int e, int used) -> bool {
        if (e == m) return true;
        if (--budget < 0) {
            exhausted = true;
            return false;
        }
        auto [a, b] = graph.edges[e];
        const int limit = std::min(max_forests, used + 1);
        for (int t = 0; t < limit; ++t) {
            ForestState& f = forests[t];
            if (f.degree[a] >= 2 || f.degree[b] >= 2) continue;
            const int ra = f.find(a), rb = f.find(b);
            if (ra == rb) continue;  // would close a cycle
            ++f.degree[a];
            ++f.degree[b];
            f.parent[ra] = rb;
            assignment[e] = t;
            if (place(e + 1, std::max(used, t + 1))) return true;
            assignment[e] = -1;
            f.parent[ra] = ra;
            --f.degree[a];
            --f.degree[b];
            if (exhausted) return false;
        }
        return false;
    };

    if (!place(0, 0)) {
        if (exhausted)
            throw input_error("linear-forest search budget exhausted");
        throw input_error("graph admits no decomposition into " +
                          std::to_string(max_forests) + " linear forests");
    }

    LinearForestDecomposition out;
    for (int t = 0; t < max_forests; ++t) {
        std::vector<std::pair<int, int>> edges;
        for (int e = 0; e < m; ++e)
            if (assignment[e] == t) edges.push_back(graph.edges[e]);
        out.forests.push_back(canonical_forest(edges, graph.n_vertices));
    }
    validate_decomposition(graph, out);
    return out;
}

CnfInstance CnfInstance::make(int n_vars, std::vector<std::vector<int>> clauses) {
    if (n_vars < 1) throw input_error("formula needs at least one variable");
    if (clauses.empty()) throw input_error("formula needs at least one clause");
    const int q = static_cast<int>(clauses.front().size());
    if (q < 2) throw input_error("clauses need at least two literals");
    std::vector<int> positive(n_vars + 1, 0), negative(n_vars + 1, 0);
    for (const auto& clause : clauses) {
        if (static_cast<int>(clause.size()) != q)
            throw input_error("all clauses must have the same width");
        std::set<int> vars;
        for (int lit : clause) {
            const int v = std::abs(lit);
            if (lit == 0 || v > n_vars)
                throw input_error("literal references variable outside 1.." +
                                  std::to_string(n_vars));
            if (!vars.insert(v).second)
                throw input_error("clause repeats variable " + std::to_string(v));
            (lit > 0 ? positive : negative)[v] += 1;
        }
    }
    for (int v = 1; v <= n_vars; ++v) {
        if (positive[v] + negative[v] != 3)
            throw input_error("variable " + std::to_string(v) +
                              " must occur exactly three times");
        if (positive[v] == 0 || negative[v] == 0)
            throw input_error("variable " + std::to_string(v) +
                              " must occur with both polarities");
    }
    if (3 * n_vars != q * static_cast<int>(clauses.size()))
        throw input_error("occurrence accounting is inconsistent");
    CnfInstance cnf;
    cnf.n_vars = n_vars;
    cnf.clauses = std::move(clauses);
    cnf.q = q;
    return cnf;
}

int CnfInstance::satisfied_count(const std::vector<char>& assignment) const {
    int count = 0;
    for (const auto& clause : clauses)
        for (int lit : clause) {
            const bool value = assignment[std::abs(lit) - 1];
            if ((lit > 0 && value) || (lit < 0 && !value)) {
                ++count;
                break;
            }
        }
    return count;
}

DdmInstance DdmInstance::make(int d, std::vector<int> set_sizes,
                              std::vector<std::vector<int>> edges) {
    if (d < 2) throw input_error("matching dimension must be at least 2");
    if (static_cast<int>(set_sizes.size()) != d)
        throw input_error("need one vertex-set size per dimension");
    for (int s : set_sizes)
        if (s < 1) throw input_error("vertex sets must be non-empty");
    for (const auto& edge : edges) {
        if (static_cast<int>(edge.size()) != d)
            throw input_error("hyper-edge arity mismatch");
        for (int i = 0; i < d; ++i)
            if (edge[i] < 1 || edge[i] > set_sizes[i])
                throw input_error("hyper-edge coordinate outside its vertex set");
    }
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw input_error("duplicate hyper-edge");
    DdmInstance ddm;
    ddm.d = d;
    ddm.set_sizes = std::move(set_sizes);
    ddm.edges = std::move(edges);
    return ddm;
}

bool DdmInstance::disjoint(int e1, int e2) const {
    for (int i = 0; i < d; ++i)
        if (edges[e1][i] == edges[e2][i]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Legends and constructions.
// ---------------------------------------------------------------------------

std::string reduction_kind_name(ReductionKind kind) {
    switch (kind) {
        case ReductionKind::mis_msr4: return "mis-msr4";
        case ReductionKind::mis_msr3: return "mis-msr3";
        case ReductionKind::sat_msr2: return "sat-msr2";
        case ReductionKind::ddm_msr: return "ddm-msr";
    }
    throw internal_error("unknown reduction kind");
}

ReductionKind parse_reduction_kind(const std::string& name) {
    if (name == "mis-msr4") return ReductionKind::mis_msr4;
    if (name == "mis-msr3") return ReductionKind::mis_msr3;
    if (name == "sat-msr2") return ReductionKind::sat_msr2;
    if (name == "ddm-msr") return ReductionKind::ddm_msr;
    throw input_error("unknown reduction kind '" + name + "'");
}

std::string MarkerRole::describe() const {
    std::string base;
    switch (kind) {
        case Kind::vertex: base = "vertex(" + std::to_string(index1) + ")"; break;
        case Kind::dummy: base = "dummy(" + std::to_string(index1) + ")"; break;
        case Kind::true_mark:
            base = "true(" + std::to_string(index1) + "," + std::to_string(index2) + ")";
            break;
        case Kind::false_mark:
            base = "false(" + std::to_string(index1) + "," + std::to_string(index2) + ")";
            break;
        case Kind::clause: base = "clause(" + std::to_string(index1) + ")"; break;
        case Kind::literal:
            base = "literal(" + std::to_string(index1) + "," + std::to_string(index2) + ")";
            break;
        case Kind::variable: base = "variable(" + std::to_string(index1) + ")"; break;
        case Kind::edge: base = "edge(" + std::to_string(index1) + ")"; break;
    }
    return base + (left ? ".l" : ".r");
}

namespace {

using RoleKey = std::tuple<int, int, int, int>;

RoleKey role_key(const MarkerRole& role) {
    return {static_cast<int>(role.kind), role.index1, role.index2,
            role.left ? 1 : 0};
}

struct LegendBuilder {
    std::vector<MarkerRole> legend{MarkerRole{}};  // slot 0 unused
    std::map<RoleKey, int> ids;

    int add(const MarkerRole& role) {
        const int id = static_cast<int>(legend.size());
        legend.push_back(role);
        if (!ids.emplace(role_key(role), id).second)
            throw internal_error("duplicate marker role in legend");
        return id;
    }
    int id_of(const MarkerRole& role) const {
        auto it = ids.find(role_key(role));
        if (it == ids.end()) throw internal_error("role missing from legend");
        return it->second;
    }
};

MarkerRole vertex_role(int v, bool left) {
    return {MarkerRole::Kind::vertex, v, 0, left};
}
MarkerRole dummy_role(int i, bool left) {
    return {MarkerRole::Kind::dummy, i, 0, left};
}
MarkerRole edge_role(int e, bool left) {
    return {MarkerRole::Kind::edge, e, 0, left};
}

// Interleaved serialization of one path v1..vk over its vertex pairs:
// v1.l, then (v_{i+1}.l, v_i.r) for i = 1..k-1, then vk.r.
template <typename RoleFn>
void append_path(const std::vector<int>& path, RoleFn role,
                 const LegendBuilder& legend, SignedSequence* out) {
    out->push_back(legend.id_of(role(path.front(), true)));
    for (size_t i = 1; i < path.size(); ++i) {
        out->push_back(legend.id_of(role(path[i], true)));
        out->push_back(legend.id_of(role(path[i - 1], false)));
    }
    out->push_back(legend.id_of(role(path.back(), false)));
}

template <typename RoleFn>
void append_pair(int index, RoleFn role, const LegendBuilder& legend,
                 SignedSequence* out) {
    out->push_back(legend.id_of(role(index, true)));
    out->push_back(legend.id_of(role(index, false)));
}

LinearForestDecomposition pad_forests(LinearForestDecomposition forests,
                                      size_t count) {
    while (forests.forests.size() < count) forests.forests.push_back({});
    if (forests.forests.size() != count)
        throw input_error("construction expects at most " +
                          std::to_string(count) + " linear forests");
    return forests;
}

// <E_t><V_t> style section: interleaved path groups followed by the pairs of
// vertices the forest does not touch, ascending.
SignedSequence forest_section(const Graph& graph, const LinearForest& forest,
                              const LegendBuilder& legend) {
    SignedSequence out;
    for (const auto& path : forest.paths)
        append_path(path, vertex_role, legend, &out);
    for (int v = 1; v <= graph.n_vertices; ++v)
        if (!forest.touches(v)) append_pair(v, vertex_role, legend, &out);
    return out;
}

}  // namespace

int ReductionArtifact::role_id(const MarkerRole& role) const {
    for (size_t id = 1; id < legend.size(); ++id)
        if (role_key(legend[id]) == role_key(role)) return static_cast<int>(id);
    throw internal_error("role missing from legend: " + role.describe());
}

ReductionArtifact reduce_mis_msr4(const Graph& graph,
                                  const LinearForestDecomposition& forests_in) {
    auto forests = pad_forests(forests_in, 2);
    validate_decomposition(graph, forests);
    const int n = graph.n_vertices;
    if (n < 1) throw input_error("graph needs at least one vertex");

    LegendBuilder legend;
    for (int v = 1; v <= n; ++v) {
        legend.add(vertex_role(v, true));
        legend.add(vertex_role(v, false));
    }

    SignedSequence fwd, bwd;
    for (int v = 1; v <= n; ++v) append_pair(v, vertex_role, legend, &fwd);
    for (int v = n; v >= 1; --v) append_pair(v, vertex_role, legend, &bwd);

    std::vector<SignedSequence> maps{fwd, bwd,
                                     forest_section(graph, forests.forests[0], legend),
                                     forest_section(graph, forests.forests[1], legend)};
    ReductionArtifact artifact{ReductionKind::mis_msr4,
                               Instance::make(std::move(maps)),
                               legend.legend, graph, forests};
    return artifact;
}

ReductionArtifact reduce_mis_msr3(const Graph& graph,
                                  const LinearForestDecomposition& forests_in) {
    auto forests = pad_forests(forests_in, 2);
    validate_decomposition(graph, forests);
    const int n = graph.n_vertices;
    if (n < 1) throw input_error("graph needs at least one vertex");

    // Ids follow the first map: vertex pair i occupies 4(i-1)+1..2, its dummy
    // pair 4(i-1)+3..4.
    LegendBuilder legend;
    for (int i = 1; i <= n; ++i) {
        legend.add(vertex_role(i, true));
        legend.add(vertex_role(i, false));
        legend.add(dummy_role(i, true));
        legend.add(dummy_role(i, false));
    }

    SignedSequence g0;
    for (int i = 1; i <= n; ++i) {
        append_pair(i, vertex_role, legend, &g0);
        append_pair(i, dummy_role, legend, &g0);
    }
    SignedSequence reversed_dummies;
    for (int i = n; i >= 1; --i) append_pair(i, dummy_role, legend, &reversed_dummies);

    auto vertex_section = [&](const LinearForest& forest) {
        SignedSequence out;
        for (int v = 1; v <= n; ++v)
            if (!forest.touches(v)) append_pair(v, vertex_role, legend, &out);
        return out;
    };
    auto edge_section = [&](const LinearForest& forest) {
        SignedSequence out;
        for (const auto& path : forest.paths)
            append_path(path, vertex_role, legend, &out);
        return out;
    };

    SignedSequence g1 = vertex_section(forests.forests[0]);
    {
        auto e1 = edge_section(forests.forests[0]);
        g1.insert(g1.end(), e1.begin(), e1.end());
        g1.insert(g1.end(), reversed_dummies.begin(), reversed_dummies.end());
    }
    SignedSequence g2 = reversed_dummies;
    {
        auto e2 = edge_section(forests.forests[1]);
        g2.insert(g2.end(), e2.begin(), e2.end());
        auto v2 = vertex_section(forests.forests[1]);
        g2.insert(g2.end(), v2.begin(), v2.end());
    }

    ReductionArtifact artifact{ReductionKind::mis_msr3,
                               Instance::make({g0, g1, g2}),
                               legend.legend, graph, forests};
    return artifact;
}

namespace {

struct SatOccurrence {
    int clause = -1;   // -1: slot unused
    int slot_index = 0;  // literal slot within the clause, assigned in map-1 order
};

// Slot layout per variable: positives wrap false(i,1).l then false(i,2).l in
// clause order; negatives wrap true(i,2).r then true(i,1).r.
struct SatSlots {
    SatOccurrence pos1, neg1, pos2, neg2;
};

MarkerRole true_role(int var, int copy, bool left) {
    return {MarkerRole::Kind::true_mark, var, copy, left};
}
MarkerRole false_role(int var, int copy, bool left) {
    return {MarkerRole::Kind::false_mark, var, copy, left};
}
MarkerRole clause_role(int j, bool left) {
    return {MarkerRole::Kind::clause, j, 0, left};
}
MarkerRole literal_role(int j, int t, bool left) {
    return {MarkerRole::Kind::literal, j, t, left};
}
MarkerRole variable_role(int i, bool left) {
    return {MarkerRole::Kind::variable, i, 0, left};
}

}  // namespace

ReductionArtifact reduce_sat_msr2(const CnfInstance& cnf) {
    const int n = cnf.n_vars;
    const int m = cnf.num_clauses();
    const int q = cnf.q;

    std::vector<SatSlots> slots(n + 1);
    for (int j = 0; j < m; ++j)
        for (int lit : cnf.clauses[j]) {
            const int v = std::abs(lit);
            SatSlots& s = slots[v];
            if (lit > 0)
                (s.pos1.clause < 0 ? s.pos1 : s.pos2).clause = j + 1;
            else
                (s.neg1.clause < 0 ? s.neg1 : s.neg2).clause = j + 1;
        }

    // First map, built role by role; ids are positions in it.
    std::vector<MarkerRole> g1_roles;
    std::vector<int> slot_counter(m + 1, 0);
    auto push = [&](const MarkerRole& role) { g1_roles.push_back(role); };
    auto push_wrapped = [&](SatOccurrence& occ, const MarkerRole& anchor) {
        if (occ.clause < 0) {
            push(anchor);
            return;
        }
        occ.slot_index = ++slot_counter[occ.clause];
        push(literal_role(occ.clause, occ.slot_index, true));
        push(anchor);
        push(literal_role(occ.clause, occ.slot_index, false));
    };
    for (int i = 1; i <= n; ++i) {
        SatSlots& s = slots[i];
        push_wrapped(s.pos1, false_role(i, 1, true));
        push(true_role(i, 2, true));
        push(false_role(i, 1, false));
        push_wrapped(s.neg1, true_role(i, 2, false));
        push_wrapped(s.pos2, false_role(i, 2, true));
        push(true_role(i, 1, true));
        push(false_role(i, 2, false));
        push_wrapped(s.neg2, true_role(i, 1, false));
    }
    push(dummy_role(1, true));
    push(dummy_role(1, false));
    push(dummy_role(2, true));
    push(dummy_role(2, false));
    for (int j = 1; j <= m; ++j) {
        push(clause_role(j, true));
        push(clause_role(j, false));
    }
    for (int i = 1; i <= n; ++i) {
        push(variable_role(i, true));
        push(variable_role(i, false));
    }
    for (int j = 1; j <= m; ++j)
        if (slot_counter[j] != q)
            throw internal_error("clause slot accounting failed");

    LegendBuilder legend;
    SignedSequence g1;
    for (const auto& role : g1_roles) g1.push_back(legend.add(role));
    const int total = static_cast<int>(g1.size());
    if (total != 2 * (5 * n + m + q * m + 2))
        throw internal_error("marker count mismatch in sat construction");

    SignedSequence g2;
    for (int i = n; i >= 1; --i) {
        g2.push_back(legend.id_of(true_role(i, 1, true)));
        g2.push_back(legend.id_of(false_role(i, 1, true)));
        g2.push_back(legend.id_of(true_role(i, 1, false)));
        g2.push_back(legend.id_of(false_role(i, 1, false)));
        g2.push_back(legend.id_of(variable_role(i, true)));
        g2.push_back(legend.id_of(variable_role(i, false)));
        g2.push_back(legend.id_of(false_role(i, 2, true)));
        g2.push_back(legend.id_of(true_role(i, 2, true)));
        g2.push_back(legend.id_of(false_role(i, 2, false)));
        g2.push_back(legend.id_of(true_role(i, 2, false)));
    }
    for (int j = m; j >= 1; --j) {
        g2.push_back(legend.id_of(clause_role(j, true)));
        g2.push_back(legend.id_of(clause_role(j, false)));
        for (int t = q; t >= 1; --t)
            g2.push_back(legend.id_of(literal_role(j, t, true)));
        for (int t = q; t >= 1; --t)
            g2.push_back(legend.id_of(literal_role(j, t, false)));
    }
    g2.push_back(legend.id_of(dummy_role(2, true)));
    g2.push_back(legend.id_of(dummy_role(2, false)));
    g2.push_back(legend.id_of(dummy_role(1, true)));
    g2.push_back(legend.id_of(dummy_role(1, false)));

    ReductionArtifact artifact{ReductionKind::sat_msr2,
                               Instance::make({g1, g2}),
                               legend.legend, cnf, {}};
    return artifact;
}

ReductionArtifact reduce_ddm_msr(const DdmInstance& ddm) {
    const int n = ddm.num_edges();
    if (n < 1) throw input_error("matching instance needs at least one hyper-edge");

    LegendBuilder legend;
    for (int e = 1; e <= n; ++e) {
        legend.add(edge_role(e, true));
        legend.add(edge_role(e, false));
    }
    SignedSequence fwd, bwd;
    for (int e = 1; e <= n; ++e) append_pair(e, edge_role, legend, &fwd);
    for (int e = n; e >= 1; --e) append_pair(e, edge_role, legend, &bwd);

    std::vector<SignedSequence> maps{fwd, bwd};
    for (int dim = 0; dim < ddm.d; ++dim) {
        SignedSequence g;
        for (int v = 1; v <= ddm.set_sizes[dim]; ++v) {
            std::vector<int> incident;
            for (int e = 0; e < n; ++e)
                if (ddm.edges[e][dim] == v) incident.push_back(e + 1);
            for (int e : incident) g.push_back(legend.id_of(edge_role(e, true)));
            for (int e : incident) g.push_back(legend.id_of(edge_role(e, false)));
        }
        maps.push_back(std::move(g));
    }

    ReductionArtifact artifact{ReductionKind::ddm_msr,
                               Instance::make(std::move(maps)),
                               legend.legend, ddm, {}};
    return artifact;
}

// ---------------------------------------------------------------------------
// Embedding and extraction.
// ---------------------------------------------------------------------------

namespace {

std::vector<int> pair_ids(const ReductionArtifact& artifact,
                          const MarkerRole& left_role) {
    MarkerRole right = left_role;
    right.left = false;
    return {artifact.role_id(left_role), artifact.role_id(right)};
}

void require(bool ok, const std::string& what) {
    if (!ok) throw input_error(what);
}

Solution evaluate_or_die(const Instance& instance, const std::vector<int>& kept,
                         const std::string& context) {
    auto sol = evaluate(instance, normalize_id_set(kept, instance.n));
    if (!sol) throw internal_error(context + ": embedded kept set infeasible");
    return *sol;
}

std::vector<char> to_bitmap(const std::vector<int>& items, int n,
                            const std::string& what) {
    std::vector<char> bitmap(n + 1, 0);
    for (int v : items) {
        require(v >= 1 && v <= n, what + " index " + std::to_string(v) +
                                      " outside 1.." + std::to_string(n));
        require(!bitmap[v], what + " lists " + std::to_string(v) + " twice");
        bitmap[v] = 1;
    }
    return bitmap;
}

}  // namespace

Solution embed_source_solution(const ReductionArtifact& artifact,
                               const SourceWitness& witness) {
    std::vector<int> kept;
    switch (artifact.kind) {
        case ReductionKind::mis_msr4:
        case ReductionKind::mis_msr3: {
            const Graph& graph = artifact.graph();
            to_bitmap(witness.selected, graph.n_vertices, "independent set");
            for (size_t i = 0; i < witness.selected.size(); ++i)
                for (size_t j = i + 1; j < witness.selected.size(); ++j)
                    require(!graph.has_edge(witness.selected[i], witness.selected[j]),
                            "witness is not an independent set");
            for (int v : witness.selected)
                for (int id : pair_ids(artifact, vertex_role(v, true)))
                    kept.push_back(id);
            if (artifact.kind == ReductionKind::mis_msr3)
                for (int i = 1; i <= graph.n_vertices; ++i)
                    for (int id : pair_ids(artifact, dummy_role(i, true)))
                        kept.push_back(id);
            Solution sol = evaluate_or_die(artifact.instance, kept, "mis embed");
            const int k = static_cast<int>(witness.selected.size());
            const int expect = artifact.kind == ReductionKind::mis_msr4
                                   ? 2 * k
                                   : 2 * (graph.n_vertices + k);
            if (sol.length_value != expect)
                throw internal_error("mis embed produced unexpected length");
            return sol;
        }
        case ReductionKind::sat_msr2: {
            const CnfInstance& cnf = artifact.cnf();
            require(static_cast<int>(witness.assignment.size()) == cnf.n_vars,
                    "assignment must cover every variable");
            for (int i = 1; i <= cnf.n_vars; ++i) {
                const bool value = witness.assignment[i - 1];
                for (int copy = 1; copy <= 2; ++copy) {
                    const MarkerRole role = value ? true_role(i, copy, true)
                                                  : false_role(i, copy, true);
                    for (int id : pair_ids(artifact, role)) kept.push_back(id);
                }
            }
            int k = 0;
            for (int j = 1; j <= cnf.num_clauses(); ++j) {
                // Lowest literal slot whose literal is true under the
                // assignment; slots are numbered in map-1 order.
                int chosen_slot = 0;
                for (int t = 1; t <= cnf.q && chosen_slot == 0; ++t) {
                    const int lit = literal_of_slot(artifact, j, t);
                    const bool value = witness.assignment[std::abs(lit) - 1];
                    if ((lit > 0 && value) || (lit < 0 && !value)) chosen_slot = t;
                }
                if (chosen_slot > 0) {
                    ++k;
                    for (int id : pair_ids(artifact, literal_role(j, chosen_slot, true)))
                        kept.push_back(id);
                }
            }
            for (int j = 1; j <= cnf.num_clauses(); ++j)
                for (int id : pair_ids(artifact, clause_role(j, true)))
                    kept.push_back(id);
            for (int i = 1; i <= cnf.n_vars; ++i)
                for (int id : pair_ids(artifact, variable_role(i, true)))
                    kept.push_back(id);
            for (int p = 1; p <= 2; ++p)
                for (int id : pair_ids(artifact, dummy_role(p, true)))
                    kept.push_back(id);
            Solution sol = evaluate_or_die(artifact.instance, kept, "sat embed");
            const int expect =
                2 * (3 * cnf.n_vars + cnf.num_clauses() + k + 2);
            if (sol.length_value != expect)
                throw internal_error("sat embed produced unexpected length");
            return sol;
        }
        case ReductionKind::ddm_msr: {
            const DdmInstance& ddm = artifact.ddm();
            to_bitmap(witness.selected, ddm.num_edges(), "matching");
            for (size_t i = 0; i < witness.selected.size(); ++i)
                for (size_t j = i + 1; j < witness.selected.size(); ++j)
                    require(ddm.disjoint(witness.selected[i] - 1,
                                         witness.selected[j] - 1),
                            "witness hyper-edges are not pairwise disjoint");
            for (int e : witness.selected)
                for (int id : pair_ids(artifact, edge_role(e, true)))
                    kept.push_back(id);
            Solution sol = evaluate_or_die(artifact.instance, kept, "ddm embed");
            if (sol.length_value != 2 * static_cast<int>(witness.selected.size()))
                throw internal_error("ddm embed produced unexpected length");
            return sol;
        }
    }
    throw internal_error("unknown reduction kind");
}

namespace {

// Pair strips of a verified solution, read as role pairs; asserts every strip
// is an index-matched pair of the given kind (the automatic canonical form of
// the two-sided constructions).
std::vector<int> paired_indices(const ReductionArtifact& artifact,
                                const Solution& solution,
                                MarkerRole::Kind kind) {
    std::vector<int> out;
    for (const auto& strip : solution.strips) {
        if (strip.size() != 2)
            throw internal_error("expected pair strips only");
        const MarkerRole& a = artifact.legend[std::abs(strip[0])];
        const MarkerRole& b = artifact.legend[std::abs(strip[1])];
        if (a.kind != kind || b.kind != kind || a.index1 != b.index1)
            throw internal_error("expected index-matched pair strips");
        out.push_back(a.index1);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

ExtractResult extract_source_solution(const ReductionArtifact& artifact,
                                      const Solution& solution, Variant variant) {
    auto report = verify(artifact.instance, solution);
    if (!report.passed)
        throw input_error("solution fails verification: " + report.issues.front());
    if (variant == Variant::cmsr && artifact.kind != ReductionKind::mis_msr3)
        throw input_error("the cover back-map is defined on mis-msr3 artifacts");

    ExtractResult result;
    switch (artifact.kind) {
        case ReductionKind::mis_msr4: {
            result.canonicalized = solution;
            result.witness.selected =
                paired_indices(artifact, solution, MarkerRole::Kind::vertex);
            result.value = static_cast<int>(result.witness.selected.size());
            for (size_t i = 0; i < result.witness.selected.size(); ++i)
                for (size_t j = i + 1; j < result.witness.selected.size(); ++j)
                    if (artifact.graph().has_edge(result.witness.selected[i],
                                                  result.witness.selected[j]))
                        throw internal_error("extracted set is not independent");
            break;
        }
        case ReductionKind::mis_msr3: {
            auto [canonical, creport] = canonicalize_msr3(artifact, solution);
            (void)creport;
            result.canonicalized = canonical;
            const Graph& graph = artifact.graph();
            std::vector<char> kept_vertex(graph.n_vertices + 1, 0);
            for (const auto& strip : canonical.strips) {
                const MarkerRole& a = artifact.legend[std::abs(strip[0])];
                if (a.kind == MarkerRole::Kind::vertex)
                    kept_vertex[a.index1] = 1;
            }
            for (int v = 1; v <= graph.n_vertices; ++v)
                if (kept_vertex[v]) result.witness.selected.push_back(v);
                else result.cover.push_back(v);
            result.value = static_cast<int>(result.witness.selected.size());
            result.cover_size = static_cast<int>(result.cover.size());
            for (size_t i = 0; i < result.witness.selected.size(); ++i)
                for (size_t j = i + 1; j < result.witness.selected.size(); ++j)
                    if (graph.has_edge(result.witness.selected[i],
                                       result.witness.selected[j]))
                        throw internal_error("extracted set is not independent");
            if (2 * result.value < canonical.length_value - 2 * graph.n_vertices)
                throw internal_error("extraction bound violated");
            break;
        }
        case ReductionKind::sat_msr2: {
            auto [canonical, creport] = canonicalize_msr2(artifact, solution);
            (void)creport;
            result.canonicalized = canonical;
            const CnfInstance& cnf = artifact.cnf();
            std::vector<char> assignment(cnf.n_vars, 0);
            std::vector<char> true_pair(cnf.n_vars + 1, 0);
            for (const auto& strip : canonical.strips) {
                const MarkerRole& a = artifact.legend[std::abs(strip[0])];
                if (a.kind == MarkerRole::Kind::true_mark) true_pair[a.index1] = 1;
            }
            for (int i = 1; i <= cnf.n_vars; ++i) assignment[i - 1] = true_pair[i];
            result.witness.assignment = assignment;
            result.value = cnf.satisfied_count(assignment);
            break;
        }
        case ReductionKind::ddm_msr: {
            result.canonicalized = solution;
            result.witness.selected =
                paired_indices(artifact, solution, MarkerRole::Kind::edge);
            result.value = static_cast<int>(result.witness.selected.size());
            const DdmInstance& ddm = artifact.ddm();
            for (size_t i = 0; i < result.witness.selected.size(); ++i)
                for (size_t j = i + 1; j < result.witness.selected.size(); ++j)
                    if (!ddm.disjoint(result.witness.selected[i] - 1,
                                      result.witness.selected[j] - 1))
                        throw internal_error("extracted hyper-edges intersect");
            break;
        }
    }
    return result;
}

namespace {
int literal_of_slot(const ReductionArtifact& artifact, int clause, int slot) {
    // The marker right after a literal left marker in map 1 is its anchor:
    // false(i,s).l anchors a positive literal, true(i,s).r a negative one.
    const int left_id = artifact.role_id(literal_role(clause, slot, true));
    const MarkerRole& anchor = artifact.legend[left_id + 1];
    if (anchor.kind == MarkerRole::Kind::false_mark) return anchor.index1;
    if (anchor.kind == MarkerRole::Kind::true_mark) return -anchor.index1;
    throw internal_error("literal marker lacks its anchor");
}
}  // namespace

// ---------------------------------------------------------------------------
// Source oracles.
// ---------------------------------------------------------------------------

namespace {

constexpr int kOracleLimit = 22;

// Enumerates indicator vectors (index 1 most significant) in ascending
// order; returns the first subset attaining the best value.
template <typename Feasible, typename Value>
OracleResult enumerate_best(int count, bool maximize, Feasible feasible,
                            Value value) {
    if (count > kOracleLimit)
        throw input_error("oracle size guard exceeded (" +
                          std::to_string(count) + " > " +
                          std::to_string(kOracleLimit) + ")");
    OracleResult best;
    bool have = false;
    std::vector<int> items;
    for (long mask = 0; mask < (1L << count); ++mask) {
        items.clear();
        for (int i = 1; i <= count; ++i)
            if (mask & (1L << (count - i))) items.push_back(i);
        if (!feasible(items)) continue;
        const int val = value(items);
        if (!have || (maximize ? val > best.value : val < best.value)) {
            best.value = val;
            best.witness.selected = items;
            have = true;
        }
    }
    if (!have) throw internal_error("oracle found no feasible subset");
    return best;
}

}  // namespace

OracleResult mis_oracle(const Graph& graph) {
    return enumerate_best(
        graph.n_vertices, true,
        [&](const std::vector<int>& vs) {
            for (size_t i = 0; i < vs.size(); ++i)
                for (size_t j = i + 1; j < vs.size(); ++j)
                    if (graph.has_edge(vs[i], vs[j])) return false;
            return true;
        },
        [](const std::vector<int>& vs) { return static_cast<int>(vs.size()); });
}

OracleResult vc_oracle(const Graph& graph) {
    return enumerate_best(
        graph.n_vertices, false,
        [&](const std::vector<int>& vs) {
            std::vector<char> in(graph.n_vertices + 1, 0);
            for (int v : vs) in[v] = 1;
            for (auto [a, b] : graph.edges)
                if (!in[a] && !in[b]) return false;
            return true;
        },
        [](const std::vector<int>& vs) { return static_cast<int>(vs.size()); });
}

OracleResult sat_oracle(const CnfInstance& cnf) {
    if (cnf.n_vars > kOracleLimit)
        throw input_error("oracle size guard exceeded");
    OracleResult best;
    bool have = false;
    for (long mask = 0; mask < (1L << cnf.n_vars); ++mask) {
        std::vector<char> assignment(cnf.n_vars, 0);
        for (int i = 1; i <= cnf.n_vars; ++i)
            if (mask & (1L << (cnf.n_vars - i))) assignment[i - 1] = 1;
        const int val = cnf.satisfied_count(assignment);
        if (!have || val > best.value) {
            best.value = val;
            best.witness.assignment = assignment;
            have = true;
        }
    }
    return best;
}

OracleResult ddm_oracle(const DdmInstance& ddm) {
    return enumerate_best(
        ddm.num_edges(), true,
        [&](const std::vector<int>& es) {
            for (size_t i = 0; i < es.size(); ++i)
                for (size_t j = i + 1; j < es.size(); ++j)
                    if (!ddm.disjoint(es[i] - 1, es[j] - 1)) return false;
            return true;
        },
        [](const std::vector<int>& es) { return static_cast<int>(es.size()); });
}

}  // namespace msr
