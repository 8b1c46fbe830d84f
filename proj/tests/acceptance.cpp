// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Golden instances live under tests/data; harness instances are
// regenerated from fixed seeds.

#include "msr/approx.hpp"
#include "msr/canonical.hpp"
#include "msr/exact.hpp"
#include "msr/io.hpp"
#include "msr/lp.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

using namespace msr;

namespace {

std::string data_path(const std::string& name) {
    return std::string(MSR_TEST_DATA_DIR) + "/" + name;
}

struct Checker {
    int failures = 0;
    std::ostringstream detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            ++failures;
            detail << "    " << what << "\n";
        }
    }
};

struct Criterion {
    int number;
    std::string title;
    std::function<void(Checker&)> body;
};

// Shared harness instances (fixed seeds, regenerated on demand).

struct MisTrial {
    Graph graph;
    ReductionArtifact artifact;
};

std::vector<MisTrial> mis_harness(ReductionKind kind, int trials, int max_n,
                                  std::uint64_t seed0) {
    std::vector<MisTrial> out;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(seed0 + 1000003ULL * trial);
        const int n = 1 + rng.below(max_n);
        Graph graph = gen_graph_maxdeg(n, 3, rng.next());
        auto forests = decompose_linear_forests(graph, 2);
        out.push_back({graph, kind == ReductionKind::mis_msr4
                                  ? reduce_mis_msr4(graph, forests)
                                  : reduce_mis_msr3(graph, forests)});
    }
    return out;
}

struct DdmTrial {
    DdmInstance ddm;
    ReductionArtifact artifact;
};

std::vector<DdmTrial> ddm_harness(int trials, std::uint64_t seed0) {
    std::vector<DdmTrial> out;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(seed0 + 7919ULL * trial);
        const int d = 2 + rng.below(2);
        std::vector<int> sizes(d);
        for (int& s : sizes) s = 1 + rng.below(3);
        long universe = 1;
        for (int s : sizes) universe *= s;
        const int m = 1 + rng.below(static_cast<int>(std::min<long>(7, universe)));
        DdmInstance ddm = gen_ddm(d, sizes, m, rng.next());
        out.push_back({ddm, reduce_ddm_msr(ddm)});
    }
    return out;
}

constexpr std::uint64_t kMis4Seed = 20260810;
constexpr std::uint64_t kMis3Seed = 918273;
constexpr std::uint64_t kDdmSeed = 5551212;

Solution exact_length(const Instance& instance) {
    return solve_exact(instance, {ObjectiveMode::length, Variant::msr});
}

// Deterministic fuzzed feasible solutions: random independent packings of
// 2/3-candidates.
Solution fuzz_solution(const Instance& instance, Rng& rng) {
    auto candidates = enumerate_candidates(instance, 3);
    std::vector<int> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    rng.shuffle(order);
    auto conflicts = build_conflicts(candidates);
    std::vector<int> chosen;
    const int want = candidates.empty() ? 0 : 1 + rng.below(14);
    for (int v : order) {
        bool ok = true;
        for (int u : chosen)
            if (conflicts.conflicts(u, v)) ok = false;
        if (!ok) continue;
        chosen.push_back(v);
        if (static_cast<int>(chosen.size()) >= want) break;
    }
    std::vector<int> kept;
    for (int v : chosen)
        for (SignedMarker m : candidates[v].ids) kept.push_back(std::abs(m));
    auto sol = evaluate(instance, normalize_id_set(kept, instance.n));
    if (!sol) throw internal_error("fuzzed candidate packing must be feasible");
    return *sol;
}

// --- criteria ---------------------------------------------------------------

void criterion_intro(Checker& c) {
    Instance intro = load_instance(data_path("intro.msr"));
    Solution sol = exact_length(intro);
    c.expect(sol.length_value == 8, "expected optimum 8, got " +
                                        std::to_string(sol.length_value));
    const std::vector<Strip> want{{1, 3}, {6, 7, 8}, {10, 11, 12}};
    c.expect(sol.strips == want, "strip list differs from the published optimum");
}

void criterion_mis4_golden(Checker& c) {
    auto source = load_source(data_path("mis_demo.graph"));
    auto artifact = reduce_mis_msr4(source.graph(), *source.forests);
    const std::vector<SignedSequence> want{
        {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18},
        {17, 18, 15, 16, 13, 14, 11, 12, 9, 10, 7, 8, 5, 6, 3, 4, 1, 2},
        {1, 3, 2, 5, 4, 7, 6, 9, 8, 11, 10, 12, 13, 14, 15, 16, 17, 18},
        {1, 13, 2, 15, 14, 5, 16, 6, 7, 17, 8, 11, 18, 12, 3, 4, 9, 10}};
    c.expect(artifact.instance.maps == want, "four-map construction differs");
    const int l = exact_length(artifact.instance).length_value;
    const int k = mis_oracle(source.graph()).value;
    c.expect(l == 8, "gadget optimum is " + std::to_string(l) + ", expected 8");
    c.expect(k == 4, "independent-set optimum is " + std::to_string(k));
    c.expect(l == 2 * k, "length identity l* = 2k* fails");
}

void criterion_mis3_golden(Checker& c) {
    auto source = load_source(data_path("mis_demo.graph"));
    auto artifact = reduce_mis_msr3(source.graph(), *source.forests);
    std::vector<SignedSequence> want(3);
    for (int i = 1; i <= 36; ++i) want[0].push_back(i);
    want[1] = {25, 26, 29, 30, 33, 34,
               1, 5, 2, 9, 6, 13, 10, 17, 14, 21, 18, 22,
               35, 36, 31, 32, 27, 28, 23, 24, 19, 20, 15, 16, 11, 12, 7, 8, 3, 4};
    want[2] = {35, 36, 31, 32, 27, 28, 23, 24, 19, 20, 15, 16, 11, 12, 7, 8, 3, 4,
               1, 25, 2, 29, 26, 9, 30, 10, 13, 33, 14, 21, 34, 22, 5, 6, 17, 18};
    c.expect(artifact.instance.maps == want, "three-map construction differs");

    SourceWitness witness;
    witness.selected = {2, 4, 6, 8};
    Solution embedded = embed_source_solution(artifact, witness);
    c.expect(embedded.length_value == 26,
             "embedded length " + std::to_string(embedded.length_value));
    c.expect(verify(artifact.instance, embedded).passed, "embed fails verify");
    c.expect(check_canonical(artifact, embedded).all_conditions_hold(),
             "embedded solution is not canonical");
}

void criterion_sat_golden(Checker& c) {
    auto artifact = reduce_sat_msr2(load_source(data_path("sat_demo.sat32")).cnf());
    c.expect(artifact.instance.n == 42, "marker count differs from 2(5n+m+qm+2)");
    SignedSequence g1;
    for (int i = 1; i <= 42; ++i) g1.push_back(i);
    const SignedSequence g2{24, 16, 27, 19, 41, 42, 23, 18, 25, 21,
                            12, 2, 14, 5, 39, 40, 10, 4, 13, 7,
                            37, 38, 26, 6, 28, 8,
                            35, 36, 20, 9, 22, 11,
                            33, 34, 15, 1, 17, 3,
                            31, 32, 29, 30};
    c.expect(artifact.instance.maps[0] == g1 && artifact.instance.maps[1] == g2,
             "two-map construction differs");

    SourceWitness witness;
    witness.assignment = {1, 0};
    Solution first = embed_source_solution(artifact, witness);
    c.expect(first.length_value == 28,
             "embedded length " + std::to_string(first.length_value) +
                 " != 2(3n+m+3+2)");
    c.expect(verify(artifact.instance, first).passed, "first optimum fails verify");
    c.expect(check_canonical(artifact, first).all_conditions_hold(),
             "first optimum is not canonical");

    // The alternative published optimum witnesses clause 2 by its other slot.
    IdSet other = first.kept;
    auto swap_id = [&](int from, int to) {
        for (int& id : other)
            if (id == from) id = to;
    };
    swap_id(artifact.role_id({MarkerRole::Kind::literal, 2, 1, true}),
            artifact.role_id({MarkerRole::Kind::literal, 2, 2, true}));
    swap_id(artifact.role_id({MarkerRole::Kind::literal, 2, 1, false}),
            artifact.role_id({MarkerRole::Kind::literal, 2, 2, false}));
    auto second = evaluate(artifact.instance, other);
    c.expect(second.has_value() && second->length_value == 28,
             "alternative optimum infeasible or wrong length");
    if (second) {
        c.expect(verify(artifact.instance, *second).passed,
                 "alternative optimum fails verify");
        c.expect(check_canonical(artifact, *second).all_conditions_hold(),
                 "alternative optimum is not canonical");
    }
}

void criterion_ddm_golden(Checker& c) {
    auto source = load_source(data_path("ddm_demo.ddm"));
    auto artifact = reduce_ddm_msr(source.ddm());
    const std::vector<SignedSequence> want{{1, 2, 3, 4, 5, 6, 7, 8},
                                           {7, 8, 5, 6, 3, 4, 1, 2},
                                           {1, 5, 7, 2, 6, 8, 3, 4},
                                           {3, 5, 4, 6, 1, 7, 2, 8},
                                           {1, 2, 3, 5, 7, 4, 6, 8}};
    c.expect(artifact.instance.maps == want, "matching construction differs");
    const int l = exact_length(artifact.instance).length_value;
    const int k = ddm_oracle(source.ddm()).value;
    c.expect(l == 4 && k == 2 && l == 2 * k,
             "matching identity fails: l=" + std::to_string(l) +
                 " k=" + std::to_string(k));
}

void criterion_mis4_harness(Checker& c) {
    auto trials = mis_harness(ReductionKind::mis_msr4, 50, 8, kMis4Seed);
    for (size_t i = 0; i < trials.size(); ++i) {
        const int l = exact_length(trials[i].artifact.instance).length_value;
        const int k = mis_oracle(trials[i].graph).value;
        c.expect(l == 2 * k, "trial " + std::to_string(i) + ": l*=" +
                                 std::to_string(l) + " != 2k*=" +
                                 std::to_string(2 * k));
    }
}

void criterion_mis3_harness(Checker& c) {
    auto trials = mis_harness(ReductionKind::mis_msr3, 20, 5, kMis3Seed);
    for (size_t i = 0; i < trials.size(); ++i) {
        const int n = trials[i].graph.n_vertices;
        const int l = exact_length(trials[i].artifact.instance).length_value;
        const int k = mis_oracle(trials[i].graph).value;
        c.expect(l == 2 * (n + k), "trial " + std::to_string(i) + ": l*=" +
                                       std::to_string(l) + " != 2(n+k*)=" +
                                       std::to_string(2 * (n + k)));
    }
}

void criterion_ddm_harness(Checker& c) {
    auto trials = ddm_harness(30, kDdmSeed);
    for (size_t i = 0; i < trials.size(); ++i) {
        const int l = exact_length(trials[i].artifact.instance).length_value;
        const int k = ddm_oracle(trials[i].ddm).value;
        c.expect(l == 2 * k, "trial " + std::to_string(i) + ": l*=" +
                                 std::to_string(l) + " != 2k*=" +
                                 std::to_string(2 * k));
    }
}

void criterion_ratio(Checker& c) {
    std::vector<Instance> instances;
    for (auto& t : mis_harness(ReductionKind::mis_msr4, 50, 8, kMis4Seed))
        instances.push_back(t.artifact.instance);
    for (auto& t : mis_harness(ReductionKind::mis_msr3, 20, 5, kMis3Seed))
        instances.push_back(t.artifact.instance);
    for (auto& t : ddm_harness(30, kDdmSeed))
        instances.push_back(t.artifact.instance);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed * 101);
        instances.push_back(gen_random_permutation_instance(
            2 + rng.below(3), 2 + rng.below(11), seed, std::nullopt, rng.coin()));
    }
    int index = 0;
    for (const Instance& instance : instances) {
        const int opt = exact_length(instance).length_value;
        auto result = approximate_detailed(instance, {}, 3);
        const std::string tag = "instance " + std::to_string(index++);
        c.expect(verify(instance, result.solution).passed,
                 tag + ": approximation fails verify");
        c.expect(result.solution.length_value * 2 * instance.d() >= opt,
                 tag + ": ratio bound fails (" +
                     std::to_string(result.solution.length_value) + " vs opt " +
                     std::to_string(opt) + ", d=" + std::to_string(instance.d()) +
                     ")");
        c.expect(result.lp_value >= opt - 1e-6,
                 tag + ": relaxation value below the optimum");
    }
}

void criterion_canonicalizer(Checker& c) {
    auto source = load_source(data_path("mis_demo.graph"));
    auto m4 = reduce_mis_msr4(source.graph(), *source.forests);
    auto m3 = reduce_mis_msr3(source.graph(), *source.forests);
    auto m2 = reduce_sat_msr2(load_source(data_path("sat_demo.sat32")).cnf());
    auto md = reduce_ddm_msr(load_source(data_path("ddm_demo.ddm")).ddm());
    const CnfInstance& cnf = m2.cnf();
    const int gn = source.graph().n_vertices;

    Rng rng(424242);
    for (int trial = 0; trial < 200; ++trial) {
        const std::string tag = "fuzz " + std::to_string(trial);
        {
            Solution s = fuzz_solution(m4.instance, rng);
            c.expect(check_canonical(m4, s).all_conditions_hold(),
                     tag + ": four-map solution not automatically canonical");
            auto ex = extract_source_solution(m4, s);
            c.expect(2 * ex.value >= s.length_value, tag + ": k >= l/2 fails");
        }
        {
            Solution s = fuzz_solution(m3.instance, rng);
            auto [canon, report] = canonicalize_msr3(m3, s);
            c.expect(report.output_length >= report.input_length,
                     tag + ": three-map length decreased");
            c.expect(report.all_conditions_hold(), tag + ": three-map conditions");
            auto [again, report2] = canonicalize_msr3(m3, canon);
            c.expect(again.kept == canon.kept, tag + ": three-map not idempotent");
            auto ex = extract_source_solution(m3, s);
            c.expect(2 * (ex.value + gn) >= s.length_value,
                     tag + ": k >= l/2 - n fails");
            auto cover = extract_source_solution(m3, s, Variant::cmsr);
            c.expect(2 * cover.cover_size <= s.deleted_value,
                     tag + ": c <= x/2 fails");
        }
        {
            Solution s = fuzz_solution(m2.instance, rng);
            auto [canon, report] = canonicalize_msr2(m2, s);
            c.expect(report.output_length >= report.input_length,
                     tag + ": two-map length decreased");
            c.expect(report.all_conditions_hold(), tag + ": two-map conditions");
            auto [again, report2] = canonicalize_msr2(m2, canon);
            c.expect(again.kept == canon.kept, tag + ": two-map not idempotent");
            auto ex = extract_source_solution(m2, s);
            c.expect(2 * (ex.value + 3 * cnf.n_vars + cnf.num_clauses() + 2) >=
                         s.length_value,
                     tag + ": k >= l/2 - 3n - m - 2 fails");
        }
        {
            Solution s = fuzz_solution(md.instance, rng);
            c.expect(check_canonical(md, s).all_conditions_hold(),
                     tag + ": matching solution not automatically canonical");
            auto ex = extract_source_solution(md, s);
            c.expect(2 * ex.value >= s.length_value, tag + ": k >= l/2 fails");
        }
    }
}

void criterion_gap(Checker& c) {
    std::vector<std::pair<std::string, Instance>> instances;
    {
        auto t4 = mis_harness(ReductionKind::mis_msr4, 50, 8, kMis4Seed);
        for (size_t i = 0; i < t4.size(); ++i)
            instances.emplace_back("mis4 trial " + std::to_string(i),
                                   t4[i].artifact.instance);
        auto t3 = mis_harness(ReductionKind::mis_msr3, 20, 5, kMis3Seed);
        for (size_t i = 0; i < t3.size(); ++i)
            instances.emplace_back("mis3 trial " + std::to_string(i),
                                   t3[i].artifact.instance);
    }
    auto source = load_source(data_path("mis_demo.graph"));
    instances.emplace_back(
        "four-map demo",
        reduce_mis_msr4(source.graph(), *source.forests).instance);
    instances.emplace_back(
        "three-map demo",
        reduce_mis_msr3(source.graph(), *source.forests).instance);
    instances.emplace_back(
        "two-map demo",
        reduce_sat_msr2(load_source(data_path("sat_demo.sat32")).cnf()).instance);

    std::vector<int> unconstrained_values;
    for (const auto& [tag, instance] : instances) {
        const int unconstrained = exact_length(instance).length_value;
        unconstrained_values.push_back(unconstrained);
        const int capped = exact_length(instance.with_delta(2)).length_value;
        c.expect(capped == unconstrained,
                 tag + ": gap-2 optimum " + std::to_string(capped) +
                     " != unconstrained " + std::to_string(unconstrained));
    }

    // The demo optima are pinned independently by the source oracles and the
    // construction identities (2k* = 8, 2(n + k*) = 26, 2(3n + m + k* + 2)
    // = 28), which anchors the large-instance engine as well.
    const int demo4 = unconstrained_values[unconstrained_values.size() - 3];
    const int demo3 = unconstrained_values[unconstrained_values.size() - 2];
    const int demo2 = unconstrained_values[unconstrained_values.size() - 1];
    c.expect(demo4 == 8, "four-map demo optimum is " + std::to_string(demo4));
    c.expect(demo3 == 26, "three-map demo optimum is " + std::to_string(demo3));
    c.expect(demo2 == 28, "two-map demo optimum is " + std::to_string(demo2));
}

void criterion_cmsr(Checker& c) {
    auto trials = mis_harness(ReductionKind::mis_msr3, 20, 5, kMis3Seed);
    for (size_t i = 0; i < trials.size(); ++i) {
        const int n = trials[i].graph.n_vertices;
        const Instance& instance = trials[i].artifact.instance;
        const int l = exact_length(instance).length_value;
        const int x =
            solve_exact(instance, {ObjectiveMode::length, Variant::cmsr})
                .deleted_value;
        const int k = mis_oracle(trials[i].graph).value;
        const int cover = vc_oracle(trials[i].graph).value;
        const std::string tag = "trial " + std::to_string(i);
        c.expect(x == 4 * n - l, tag + ": x* != 4n - l*");
        c.expect(x == 2 * cover, tag + ": x* != 2c*");
        c.expect(k + cover == n, tag + ": k* + c* != n");
    }
}

void criterion_adjacency(Checker& c) {
    std::vector<Instance> instances;
    for (auto& t : mis_harness(ReductionKind::mis_msr4, 50, 8, kMis4Seed))
        instances.push_back(t.artifact.instance);
    for (auto& t : ddm_harness(30, kDdmSeed))
        instances.push_back(t.artifact.instance);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed * 909);
        instances.push_back(gen_random_permutation_instance(
            2 + rng.below(3), 2 + rng.below(9), seed + 5000));
    }
    int index = 0;
    for (const Instance& instance : instances) {
        const std::string tag = "instance " + std::to_string(index++);
        Solution sol =
            solve_exact(instance, {ObjectiveMode::adjacency, Variant::msr});
        c.expect(sol.adjacency_value == sol.length_value - sol.strip_count,
                 tag + ": adjacency bookkeeping off");
        const double v3 =
            solve_lp(build_relaxation(
                         enumerate_candidates(instance, std::min(3, instance.n)),
                         instance))
                .value;
        const double v4 =
            solve_lp(build_relaxation(
                         enumerate_candidates(instance, std::min(4, instance.n)),
                         instance))
                .value;
        c.expect(v4 >= v3 - 1e-7, tag + ": relaxation value dropped with L=4");
    }
}

}  // namespace

int main() {
    std::vector<Criterion> criteria{
        {1, "worked example: exact optimum 8 with its published strips",
         criterion_intro},
        {2, "four-map gadget golden construction and length identity",
         criterion_mis4_golden},
        {3, "three-map gadget golden construction and embedding",
         criterion_mis3_golden},
        {4, "two-map gadget golden construction and canonical optima",
         criterion_sat_golden},
        {5, "matching gadget golden construction and length identity",
         criterion_ddm_golden},
        {6, "four-map identity over 50 random bounded-degree graphs",
         criterion_mis4_harness},
        {7, "three-map identity over 20 random bounded-degree graphs",
         criterion_mis3_harness},
        {8, "matching identity over 30 random instances", criterion_ddm_harness},
        {9, "approximation ratio and relaxation dominance everywhere",
         criterion_ratio},
        {10, "canonicalizer monotonicity, idempotence, and back-map bounds",
         criterion_canonicalizer},
        {11, "gap-2 optima equal unconstrained optima on gadgets",
         criterion_gap},
        {12, "complement identities on the three-map harness", criterion_cmsr},
        {13, "adjacency bookkeeping and relaxation monotonicity",
         criterion_adjacency},
    };

    int failed = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Checker checker;
        std::string error;
        try {
            criterion.body(checker);
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        const bool ok = error.empty() && checker.failures == 0;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion.number
                  << ": " << criterion.title << " (" << seconds << " s)\n";
        if (!error.empty()) std::cout << "    exception: " << error << "\n";
        std::cout << checker.detail.str();
        if (!ok) ++failed;
    }
    std::cout << (failed == 0 ? "all criteria passed"
                              : std::to_string(failed) + " criteria failed")
              << "\n";
    return failed == 0 ? 0 : 1;
}
