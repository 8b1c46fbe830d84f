#include "msr/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace msr {

std::string canonical_op_name(CanonicalOp op) {
    switch (op) {
        case CanonicalOp::cut: return "cut";
        case CanonicalOp::delete_lone: return "delete-lone";
        case CanonicalOp::insert_pair: return "insert-pair";
        case CanonicalOp::shift: return "shift";
    }
    throw internal_error("unknown canonical op");
}

namespace {

using Kind = MarkerRole::Kind;

// Working state: a kept-id set over the artifact instance (gap bounds never
// constrain canonical forms, so delta is stripped), repaired back to
// feasibility after every edit by deleting lone markers.
struct Canon {
    const ReductionArtifact& artifact;
    Instance instance;
    std::set<int> kept;
    std::vector<CanonicalOp> ops;
    std::vector<std::vector<int>> pos;  // per map, by id

    Canon(const ReductionArtifact& art, const Solution& start)
        : artifact(art), instance(art.instance.with_delta(std::nullopt)) {
        kept.insert(start.kept.begin(), start.kept.end());
        pos.resize(instance.maps.size());
        for (size_t t = 0; t < instance.maps.size(); ++t) {
            pos[t].assign(instance.n + 1, -1);
            for (int p = 0; p < instance.n; ++p)
                pos[t][std::abs(instance.maps[t][p])] = p;
        }
    }

    const MarkerRole& role(int id) const { return artifact.legend[id]; }
    bool is_kept(int id) const { return kept.count(id) > 0; }

    bool between(int map, int id, int a, int b) const {
        const int lo = std::min(pos[map][a], pos[map][b]);
        const int hi = std::max(pos[map][a], pos[map][b]);
        return lo < pos[map][id] && pos[map][id] < hi;
    }

    IdSet kept_ids() const { return IdSet(kept.begin(), kept.end()); }

    Solution current() const {
        auto sol = evaluate(instance, kept_ids());
        if (!sol)
            throw internal_error("canonicalization reached an infeasible state");
        return *sol;
    }

    void repair() {
        for (int guard = 0; guard <= instance.n; ++guard) {
            auto raw = raw_strip_partition(
                induced_subsequences(instance, kept_ids()));
            if (raw.feasible) return;
            for (const auto& block : raw.blocks)
                if (block.size() == 1) {
                    kept.erase(std::abs(block[0]));
                    ops.push_back(CanonicalOp::delete_lone);
                }
        }
        throw internal_error("repair loop failed to converge");
    }

    void insert_pair(int left_id, int right_id) {
        kept.insert(left_id);
        kept.insert(right_id);
        ops.push_back(CanonicalOp::insert_pair);
        repair();
    }

    void insert_role_pair(MarkerRole role) {
        role.left = true;
        const int l = artifact.role_id(role);
        role.left = false;
        insert_pair(l, artifact.role_id(role));
    }

    void shift(int remove_id, int add_id) {
        kept.erase(remove_id);
        kept.insert(add_id);
        ops.push_back(CanonicalOp::shift);
        repair();
    }

    void erase_marker(int id) {
        kept.erase(id);
        ops.push_back(CanonicalOp::delete_lone);
    }

    bool pair_kept(MarkerRole role) const {
        role.left = true;
        const int l = artifact.role_id(role);
        role.left = false;
        return is_kept(l) && is_kept(artifact.role_id(role));
    }

    bool pair_missing(MarkerRole role) const {
        role.left = true;
        const int l = artifact.role_id(role);
        role.left = false;
        return !is_kept(l) && !is_kept(artifact.role_id(role));
    }
};

MarkerRole mk(Kind kind, int i1, int i2 = 0) {
    return {kind, i1, i2, true};
}

bool is_proper_pair(const Canon& c, const Strip& strip) {
    if (strip.size() != 2) return false;
    const MarkerRole& a = c.role(std::abs(strip[0]));
    const MarkerRole& b = c.role(std::abs(strip[1]));
    return a.kind == b.kind && a.index1 == b.index1 && a.index2 == b.index2 &&
           a.left && !b.left;
}

// ---------------------------------------------------------------------------
// Three-map form.
// ---------------------------------------------------------------------------

// A strip holding vertex markers of two different vertices straddles the
// dummy slot of the earlier vertex in map 1; cutting there and inserting
// that (necessarily missing) dummy pair never loses length.
bool msr3_fix_mixed_strip(Canon& c) {
    Solution cur = c.current();
    for (const auto& strip : cur.strips) {
        for (size_t i = 1; i < strip.size(); ++i) {
            const MarkerRole& a = c.role(std::abs(strip[i - 1]));
            const MarkerRole& b = c.role(std::abs(strip[i]));
            if (a.kind != Kind::vertex || b.kind != Kind::vertex) continue;
            if (a.index1 == b.index1) continue;
            const int v = std::min(a.index1, b.index1);
            if (!c.pair_missing(mk(Kind::dummy, v)))
                throw internal_error("straddled dummy pair is unexpectedly kept");
            c.ops.push_back(CanonicalOp::cut);
            c.insert_role_pair(mk(Kind::dummy, v));
            return true;
        }
    }
    return false;
}

bool msr3_insert_missing_dummy(Canon& c) {
    const int n = c.artifact.graph().n_vertices;
    for (int i = 1; i <= n; ++i)
        if (c.pair_missing(mk(Kind::dummy, i))) {
            c.insert_role_pair(mk(Kind::dummy, i));
            return true;
        }
    return false;
}

std::vector<std::pair<std::string, bool>> msr3_conditions(
    const Canon& c, const Solution& sol) {
    bool pairs_only = true;
    for (const auto& strip : sol.strips) {
        if (!is_proper_pair(c, strip)) pairs_only = false;
        const Kind k = c.role(std::abs(strip[0])).kind;
        if (k != Kind::vertex && k != Kind::dummy) pairs_only = false;
    }
    bool dummies_present = true;
    for (int i = 1; i <= c.artifact.graph().n_vertices; ++i)
        if (!c.pair_kept(mk(Kind::dummy, i))) dummies_present = false;
    return {{"every strip is a vertex pair or a dummy pair", pairs_only},
            {"every dummy pair is a strip", dummies_present}};
}

// ---------------------------------------------------------------------------
// Two-map form: the eight staged passes.
// ---------------------------------------------------------------------------

// 1. A strip mixing a dummy with a non-dummy marker straddles a missing
//    dummy pair in one of the maps; insert that pair to cut it.
bool msr2_pass_dummy_purity(Canon& c) {
    Solution cur = c.current();
    for (const auto& strip : cur.strips) {
        for (size_t i = 1; i < strip.size(); ++i) {
            const int u = std::abs(strip[i - 1]);
            const int v = std::abs(strip[i]);
            const bool du = c.role(u).kind == Kind::dummy;
            const bool dv = c.role(v).kind == Kind::dummy;
            if (du == dv) {
                if (du && c.role(u).index1 != c.role(v).index1)
                    throw internal_error("strip joins the two dummy pairs");
                continue;
            }
            for (int p = 1; p <= 2; ++p) {
                if (!c.pair_missing(mk(Kind::dummy, p))) continue;
                const int pl = c.artifact.role_id(mk(Kind::dummy, p));
                MarkerRole right = mk(Kind::dummy, p);
                right.left = false;
                const int pr = c.artifact.role_id(right);
                for (int t = 0; t < 2; ++t)
                    if (c.between(t, pl, u, v) && c.between(t, pr, u, v)) {
                        c.ops.push_back(CanonicalOp::cut);
                        c.insert_role_pair(mk(Kind::dummy, p));
                        return true;
                    }
            }
            throw internal_error("mixed dummy strip without a straddled pair");
        }
    }
    return false;
}

// 2. Both dummy pairs are strips.
bool msr2_pass_dummy_presence(Canon& c) {
    for (int p = 1; p <= 2; ++p)
        if (c.pair_missing(mk(Kind::dummy, p))) {
            c.insert_role_pair(mk(Kind::dummy, p));
            return true;
        }
    return false;
}

// 3. Verify-only: strips touching clause or variable markers are exact
//    clause or variable pairs (automatic once the dummies are in place).
void msr2_assert_clause_variable_purity(Canon& c) {
    Solution cur = c.current();
    for (const auto& strip : cur.strips) {
        bool touches = false;
        for (SignedMarker m : strip) {
            const Kind k = c.role(std::abs(m)).kind;
            if (k == Kind::clause || k == Kind::variable) touches = true;
        }
        if (touches && !is_proper_pair(c, strip))
            throw internal_error("clause/variable markers escaped their pair");
    }
}

// 4. All clause pairs and variable pairs are strips.
bool msr2_pass_clause_variable_presence(Canon& c) {
    const CnfInstance& cnf = c.artifact.cnf();
    for (int j = 1; j <= cnf.num_clauses(); ++j)
        if (c.pair_missing(mk(Kind::clause, j))) {
            c.insert_role_pair(mk(Kind::clause, j));
            return true;
        }
    for (int i = 1; i <= cnf.n_vars; ++i)
        if (c.pair_missing(mk(Kind::variable, i))) {
            c.insert_role_pair(mk(Kind::variable, i));
            return true;
        }
    return false;
}

// 5. A strip joining two literal markers of one clause has the shape
//    (left of slot s, right of slot t) with s < t; shift it onto slot t.
bool msr2_pass_literal_shift(Canon& c) {
    Solution cur = c.current();
    for (const auto& strip : cur.strips) {
        bool literal = false;
        for (SignedMarker m : strip)
            if (c.role(std::abs(m)).kind == Kind::literal) literal = true;
        if (!literal || is_proper_pair(c, strip)) continue;
        if (strip.size() != 2)
            throw internal_error("oversized literal strip");
        const MarkerRole& a = c.role(std::abs(strip[0]));
        const MarkerRole& b = c.role(std::abs(strip[1]));
        if (a.kind != Kind::literal || b.kind != Kind::literal ||
            a.index1 != b.index1 || !a.left || b.left || a.index2 >= b.index2)
            throw internal_error("unexpected literal strip shape");
        c.shift(std::abs(strip[0]),
                c.artifact.role_id(mk(Kind::literal, a.index1, b.index2)));
        return true;
    }
    return false;
}

// 6. Verify-only: at most one literal pair per clause is a strip.
void msr2_assert_literal_uniqueness(Canon& c) {
    Solution cur = c.current();
    const CnfInstance& cnf = c.artifact.cnf();
    std::vector<int> count(cnf.num_clauses() + 1, 0);
    for (const auto& strip : cur.strips) {
        const MarkerRole& a = c.role(std::abs(strip[0]));
        if (a.kind == Kind::literal && ++count[a.index1] > 1)
            throw internal_error("two literal pairs of one clause are strips");
    }
}

// 7. A strip joining two true/false markers that is not a proper pair has
//    one of two shapes; shift it onto the first replacement the case
//    analysis offers.
bool msr2_pass_truefalse_shift(Canon& c) {
    Solution cur = c.current();
    for (const auto& strip : cur.strips) {
        bool tf = false;
        for (SignedMarker m : strip) {
            const Kind k = c.role(std::abs(m)).kind;
            if (k == Kind::true_mark || k == Kind::false_mark) tf = true;
        }
        if (!tf || is_proper_pair(c, strip)) continue;
        if (strip.size() != 2)
            throw internal_error("oversized true/false strip");
        const MarkerRole& a = c.role(std::abs(strip[0]));
        const MarkerRole& b = c.role(std::abs(strip[1]));
        if (a.index1 != b.index1 || a.index2 != b.index2)
            throw internal_error("true/false strip crosses variables or copies");
        const int var = a.index1;
        if (a.kind == Kind::false_mark && b.kind == Kind::true_mark &&
            a.index2 == 1 && a.left && !b.left) {
            // false(1).l true(1).r -> false pair 1
            MarkerRole fr = mk(Kind::false_mark, var, 1);
            fr.left = false;
            c.shift(std::abs(strip[1]), c.artifact.role_id(fr));
            return true;
        }
        if (a.kind == Kind::true_mark && b.kind == Kind::false_mark &&
            a.index2 == 2 && a.left && !b.left) {
            // true(2).l false(2).r -> true pair 2
            MarkerRole tr = mk(Kind::true_mark, var, 2);
            tr.left = false;
            c.shift(std::abs(strip[1]), c.artifact.role_id(tr));
            return true;
        }
        throw internal_error("unexpected true/false strip shape");
    }
    return false;
}

// 8. Per variable, either both true pairs or both false pairs are strips.
//    When neither holds, drop the lone survivor (at most one of the four
//    pairs) together with the minority-polarity literal pair, then insert
//    the uniform pair family that literal's polarity rules out.
bool msr2_pass_uniform_assignment(Canon& c) {
    const CnfInstance& cnf = c.artifact.cnf();
    for (int i = 1; i <= cnf.n_vars; ++i) {
        const bool t1 = c.pair_kept(mk(Kind::true_mark, i, 1));
        const bool t2 = c.pair_kept(mk(Kind::true_mark, i, 2));
        const bool f1 = c.pair_kept(mk(Kind::false_mark, i, 1));
        const bool f2 = c.pair_kept(mk(Kind::false_mark, i, 2));
        if ((t1 && t2) || (f1 && f2)) continue;

        for (int copy = 1; copy <= 2; ++copy) {
            for (Kind kind : {Kind::true_mark, Kind::false_mark}) {
                if (!c.pair_kept(mk(kind, i, copy))) continue;
                MarkerRole l = mk(kind, i, copy);
                MarkerRole r = l;
                r.left = false;
                c.erase_marker(c.artifact.role_id(l));
                c.erase_marker(c.artifact.role_id(r));
            }
        }

        // Minority-polarity occurrence of the variable.
        int positives = 0;
        std::vector<std::pair<int, bool>> occurrences;  // (clause, positive)
        for (int j = 0; j < cnf.num_clauses(); ++j)
            for (int lit : cnf.clauses[j])
                if (std::abs(lit) == i) {
                    occurrences.emplace_back(j + 1, lit > 0);
                    if (lit > 0) ++positives;
                }
        const bool minority_positive = positives == 1;
        int minority_clause = 0;
        for (auto [j, pos] : occurrences)
            if (pos == minority_positive) minority_clause = j;
        // Locate that clause's slot for this variable and drop its pair.
        for (int t = 1; t <= cnf.q; ++t) {
            const int left_id =
                c.artifact.role_id(mk(Kind::literal, minority_clause, t));
            const MarkerRole& anchor = c.artifact.legend[left_id + 1];
            const bool is_this =
                anchor.index1 == i &&
                ((minority_positive && anchor.kind == Kind::false_mark) ||
                 (!minority_positive && anchor.kind == Kind::true_mark));
            if (!is_this) continue;
            MarkerRole right = mk(Kind::literal, minority_clause, t);
            right.left = false;
            const int right_id = c.artifact.role_id(right);
            if (c.is_kept(left_id)) c.erase_marker(left_id);
            if (c.is_kept(right_id)) c.erase_marker(right_id);
            break;
        }
        c.repair();

        const Kind target = minority_positive ? Kind::false_mark : Kind::true_mark;
        c.insert_role_pair(mk(target, i, 1));
        c.insert_role_pair(mk(target, i, 2));
        return true;
    }
    return false;
}

std::vector<std::pair<std::string, bool>> msr2_conditions(
    const Canon& c, const Solution& sol) {
    const CnfInstance& cnf = c.artifact.cnf();
    bool pairs_only = true;
    std::vector<int> literal_count(cnf.num_clauses() + 1, 0);
    for (const auto& strip : sol.strips) {
        if (!is_proper_pair(c, strip)) pairs_only = false;
        const MarkerRole& a = c.role(std::abs(strip[0]));
        if (a.kind == Kind::literal && strip.size() == 2) ++literal_count[a.index1];
    }
    bool dummies = c.pair_kept(mk(Kind::dummy, 1)) && c.pair_kept(mk(Kind::dummy, 2));
    bool clause_variable = true;
    for (int j = 1; j <= cnf.num_clauses(); ++j)
        if (!c.pair_kept(mk(Kind::clause, j))) clause_variable = false;
    for (int i = 1; i <= cnf.n_vars; ++i)
        if (!c.pair_kept(mk(Kind::variable, i))) clause_variable = false;
    bool literal_unique = true;
    for (int j = 1; j <= cnf.num_clauses(); ++j)
        if (literal_count[j] > 1) literal_unique = false;
    bool uniform = true;
    for (int i = 1; i <= cnf.n_vars; ++i) {
        const bool both_true = c.pair_kept(mk(Kind::true_mark, i, 1)) &&
                               c.pair_kept(mk(Kind::true_mark, i, 2));
        const bool both_false = c.pair_kept(mk(Kind::false_mark, i, 1)) &&
                                c.pair_kept(mk(Kind::false_mark, i, 2));
        if (!both_true && !both_false) uniform = false;
    }
    return {{"every strip is a marker pair", pairs_only},
            {"both dummy pairs are strips", dummies},
            {"all clause and variable pairs are strips", clause_variable},
            {"at most one literal pair per clause is a strip", literal_unique},
            {"each variable keeps a uniform true or false pair family", uniform}};
}

void require_verified(const ReductionArtifact& artifact, const Solution& solution) {
    auto report = verify(artifact.instance, solution);
    if (!report.passed)
        throw input_error("solution fails verification: " + report.issues.front());
}

CanonicalReport finish(Canon& c, const Solution& input, Solution* out,
                       std::vector<std::pair<std::string, bool>> conditions) {
    Solution result = c.current();
    CanonicalReport report;
    report.input_length = input.length_value;
    report.output_length = result.length_value;
    report.operations_applied = c.ops;
    report.conditions_satisfied = std::move(conditions);
    if (report.output_length < report.input_length)
        throw internal_error("canonicalization lost strip length");
    if (!report.all_conditions_hold())
        throw internal_error("canonicalization missed a required condition");
    *out = std::move(result);
    return report;
}

}  // namespace

std::pair<Solution, CanonicalReport> canonicalize_msr3(
    const ReductionArtifact& artifact, const Solution& solution) {
    if (artifact.kind != ReductionKind::mis_msr3)
        throw input_error("canonicalize_msr3 expects a mis-msr3 artifact");
    require_verified(artifact, solution);

    Canon c(artifact, solution);
    const int bound = 4 * artifact.graph().n_vertices + 8;
    int round = 0;
    while (msr3_fix_mixed_strip(c) || msr3_insert_missing_dummy(c))
        if (++round > bound)
            throw internal_error("three-map canonicalization did not settle");

    Solution result;
    auto report = finish(c, solution, &result, msr3_conditions(c, c.current()));
    return {result, report};
}

std::pair<Solution, CanonicalReport> canonicalize_msr2(
    const ReductionArtifact& artifact, const Solution& solution) {
    if (artifact.kind != ReductionKind::sat_msr2)
        throw input_error("canonicalize_msr2 expects a sat-msr2 artifact");
    require_verified(artifact, solution);

    Canon c(artifact, solution);
    const CnfInstance& cnf = artifact.cnf();
    const int bound = 8 * (cnf.n_vars + cnf.num_clauses()) + 32;
    for (int round = 0;; ++round) {
        if (round > bound)
            throw internal_error("two-map canonicalization did not settle");
        bool changed = false;
        while (msr2_pass_dummy_purity(c)) changed = true;
        while (msr2_pass_dummy_presence(c)) changed = true;
        msr2_assert_clause_variable_purity(c);
        while (msr2_pass_clause_variable_presence(c)) changed = true;
        while (msr2_pass_literal_shift(c)) changed = true;
        msr2_assert_literal_uniqueness(c);
        while (msr2_pass_truefalse_shift(c)) changed = true;
        while (msr2_pass_uniform_assignment(c)) changed = true;
        if (!changed) break;
    }

    Solution result;
    auto report = finish(c, solution, &result, msr2_conditions(c, c.current()));
    return {result, report};
}

CanonicalReport check_canonical(const ReductionArtifact& artifact,
                                const Solution& solution) {
    require_verified(artifact, solution);
    Canon c(artifact, solution);
    CanonicalReport report;
    report.input_length = solution.length_value;
    report.output_length = solution.length_value;
    switch (artifact.kind) {
        case ReductionKind::mis_msr4:
        case ReductionKind::ddm_msr: {
            const Kind want = artifact.kind == ReductionKind::mis_msr4
                                  ? Kind::vertex
                                  : Kind::edge;
            bool ok = true;
            for (const auto& strip : solution.strips) {
                if (!is_proper_pair(c, strip)) ok = false;
                else if (c.role(std::abs(strip[0])).kind != want) ok = false;
            }
            report.conditions_satisfied = {
                {"every strip is an index-matched pair", ok}};
            break;
        }
        case ReductionKind::mis_msr3:
            report.conditions_satisfied = msr3_conditions(c, solution);
            break;
        case ReductionKind::sat_msr2:
            report.conditions_satisfied = msr2_conditions(c, solution);
            break;
    }
    return report;
}

}  // namespace msr
