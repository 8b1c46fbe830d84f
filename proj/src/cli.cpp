#include "msr/cli.hpp"

#include "msr/approx.hpp"
#include "msr/canonical.hpp"
#include "msr/core.hpp"
#include "msr/exact.hpp"
#include "msr/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace msr {

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

struct CommonFlags {
    std::string objective = "length";
    std::string variant = "msr";
    int delta = -1;  // -1: leave the instance's own bound in place
    int max_candidate_len = 3;
    std::uint64_t seed = 1;
    double time_limit = 300.0;
    std::string format = "text";
    std::string output_path;
};

ObjectiveSpec objective_spec(const CommonFlags& flags) {
    ObjectiveSpec spec;
    if (flags.objective == "length") spec.mode = ObjectiveMode::length;
    else if (flags.objective == "adjacency") spec.mode = ObjectiveMode::adjacency;
    else throw input_error("unknown objective '" + flags.objective + "'");
    if (flags.variant == "msr") spec.variant = Variant::msr;
    else if (flags.variant == "cmsr") spec.variant = Variant::cmsr;
    else throw input_error("unknown variant '" + flags.variant + "'");
    if (spec.variant == Variant::cmsr && spec.mode == ObjectiveMode::adjacency)
        throw input_error("cmsr is defined for the length objective only");
    return spec;
}

Instance apply_delta(Instance instance, const CommonFlags& flags) {
    if (flags.delta >= 0) return instance.with_delta(flags.delta);
    return instance;
}

void write_text(const std::string& text, const CommonFlags& flags,
                std::ostream& out) {
    if (!flags.output_path.empty()) {
        std::ofstream file(flags.output_path);
        if (!file) throw input_error("cannot write '" + flags.output_path + "'");
        file << text;
    } else {
        out << text;
    }
}

json solution_json(const Solution& sol) {
    json strips = json::array();
    for (const auto& strip : sol.strips) strips.push_back(strip);
    return json{{"kept", sol.kept},
                {"strips", strips},
                {"length", sol.length_value},
                {"strip_count", sol.strip_count},
                {"adjacency", sol.adjacency_value},
                {"deleted", sol.deleted_value}};
}

void emit_solution(const Solution& sol, const CommonFlags& flags,
                   std::ostream& out, json extra = json::object()) {
    if (flags.format == "json") {
        json doc = solution_json(sol);
        doc.update(extra);
        write_text(doc.dump() + "\n", flags, out);
        return;
    }
    std::string text;
    for (const auto& [key, value] : extra.items())
        text += "# " + key + "=" + value.dump() + "\n";
    text += serialize_solution(sol);
    write_text(text, flags, out);
}

SourceWitness parse_witness(const ReductionArtifact& artifact,
                            const std::string& witness_text) {
    std::istringstream in(witness_text);
    std::vector<int> values;
    int v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw input_error("witness must be a list of integers");
    SourceWitness witness;
    if (artifact.kind == ReductionKind::sat_msr2) {
        const int n = artifact.cnf().n_vars;
        std::vector<char> seen(n + 1, 0);
        witness.assignment.assign(n, 0);
        for (int lit : values) {
            const int var = std::abs(lit);
            if (var < 1 || var > n)
                throw input_error("assignment mentions unknown variable " +
                                  std::to_string(var));
            if (seen[var])
                throw input_error("assignment mentions variable " +
                                  std::to_string(var) + " twice");
            seen[var] = 1;
            witness.assignment[var - 1] = lit > 0;
        }
        for (int i = 1; i <= n; ++i)
            if (!seen[i])
                throw input_error("assignment misses variable " + std::to_string(i));
    } else {
        witness.selected = values;
    }
    return witness;
}

json witness_json(const ReductionArtifact& artifact, const SourceWitness& w) {
    if (artifact.kind == ReductionKind::sat_msr2) {
        std::vector<int> lits;
        for (size_t i = 0; i < w.assignment.size(); ++i)
            lits.push_back(w.assignment[i] ? static_cast<int>(i + 1)
                                           : -static_cast<int>(i + 1));
        return json{{"assignment", lits}};
    }
    return json{{"selected", w.selected}};
}

// --- subcommand bodies ------------------------------------------------------

int cmd_solve(const std::string& instance_path, const CommonFlags& flags,
              std::ostream& out, std::ostream& err) {
    Instance instance = apply_delta(load_instance(instance_path), flags);
    ObjectiveSpec spec = objective_spec(flags);
    ExactConfig config;
    config.time_limit_seconds = flags.time_limit;
    try {
        Solution sol = solve_exact(instance, spec, config);
        emit_solution(sol, flags, out,
                      json{{"objective", flags.objective},
                           {"variant", flags.variant},
                           {"optimal", sol.objective_value(spec)}});
        return kOk;
    } catch (const timeout_error& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
}

int cmd_approx(const std::string& instance_path, const CommonFlags& flags,
               std::ostream& out, std::ostream& err) {
    (void)err;
    Instance instance = apply_delta(load_instance(instance_path), flags);
    ObjectiveSpec spec = objective_spec(flags);
    ApproxResult result =
        approximate_detailed(instance, spec, flags.max_candidate_len);
    emit_solution(result.solution, flags, out,
                  json{{"lp_value", result.lp_value},
                       {"selected_weight", result.selected_weight}});
    return kOk;
}

int cmd_verify(const std::string& instance_path, const std::string& solution_path,
               const CommonFlags& flags, std::ostream& out, std::ostream& err) {
    Instance instance = apply_delta(load_instance(instance_path), flags);
    Solution claimed = load_solution(solution_path);
    VerificationReport report = verify(instance, claimed);
    if (flags.format == "json") {
        out << json{{"passed", report.passed}, {"issues", report.issues}}.dump()
            << "\n";
    } else {
        out << (report.passed ? "verification passed\n" : "verification failed\n");
        for (const auto& issue : report.issues) out << "  " << issue << "\n";
    }
    if (!report.passed) err << "error: solution failed verification\n";
    return report.passed ? kOk : kFailed;
}

int cmd_reduce(const std::string& kind_name, const std::string& source_path,
               const std::string& legend_path, const CommonFlags& flags,
               std::ostream& out) {
    ReductionKind kind = parse_reduction_kind(kind_name);
    ReductionArtifact artifact = artifact_from_source(kind, load_source(source_path));
    if (flags.format == "json") {
        json legend = json::array();
        for (size_t id = 1; id < artifact.legend.size(); ++id)
            legend.push_back(json{{"id", id},
                                  {"role", artifact.legend[id].describe()}});
        json doc{{"kind", kind_name},
                 {"d", artifact.instance.d()},
                 {"n", artifact.instance.n},
                 {"maps", artifact.instance.maps},
                 {"legend", legend}};
        write_text(doc.dump() + "\n", flags, out);
        return kOk;
    }
    write_text(serialize_instance(artifact.instance), flags, out);
    if (!legend_path.empty()) {
        std::ofstream file(legend_path);
        if (!file) throw input_error("cannot write '" + legend_path + "'");
        for (size_t id = 1; id < artifact.legend.size(); ++id)
            file << id << " " << artifact.legend[id].describe() << "\n";
    }
    return kOk;
}

int cmd_embed(const std::string& kind_name, const std::string& source_path,
              const std::string& witness_text, const CommonFlags& flags,
              std::ostream& out) {
    ReductionKind kind = parse_reduction_kind(kind_name);
    ReductionArtifact artifact = artifact_from_source(kind, load_source(source_path));
    SourceWitness witness = parse_witness(artifact, witness_text);
    Solution sol = embed_source_solution(artifact, witness);
    emit_solution(sol, flags, out, json{{"kind", kind_name}});
    return kOk;
}

int cmd_extract(const std::string& kind_name, const std::string& source_path,
                const std::string& solution_path, const CommonFlags& flags,
                std::ostream& out, std::ostream& err) {
    ReductionKind kind = parse_reduction_kind(kind_name);
    ReductionArtifact artifact = artifact_from_source(kind, load_source(source_path));
    Solution claimed = load_solution(solution_path);
    auto report = verify(artifact.instance, claimed);
    if (!report.passed) {
        err << "error: solution failed verification: " << report.issues.front()
            << "\n";
        return kFailed;
    }
    ObjectiveSpec spec = objective_spec(flags);
    ExtractResult result = extract_source_solution(artifact, claimed, spec.variant);
    if (flags.format == "json") {
        json doc = witness_json(artifact, result.witness);
        doc["value"] = result.value;
        if (spec.variant == Variant::cmsr) {
            doc["cover"] = result.cover;
            doc["cover_size"] = result.cover_size;
        }
        write_text(doc.dump() + "\n", flags, out);
        return kOk;
    }
    std::string text;
    if (artifact.kind == ReductionKind::sat_msr2) {
        text += "ASSIGNMENT";
        for (size_t i = 0; i < result.witness.assignment.size(); ++i)
            text += " " + std::to_string(result.witness.assignment[i]
                                             ? static_cast<int>(i + 1)
                                             : -static_cast<int>(i + 1));
        text += "\n";
    } else {
        text += "SELECTED";
        for (int v : result.witness.selected) text += " " + std::to_string(v);
        text += "\n";
    }
    text += "VALUE " + std::to_string(result.value) + "\n";
    if (spec.variant == Variant::cmsr) {
        text += "COVER";
        for (int v : result.cover) text += " " + std::to_string(v);
        text += "\nCOVER_SIZE " + std::to_string(result.cover_size) + "\n";
    }
    write_text(text, flags, out);
    return kOk;
}

int cmd_canonicalize(const std::string& kind_name, const std::string& source_path,
                     const std::string& solution_path, const CommonFlags& flags,
                     std::ostream& out, std::ostream& err) {
    ReductionKind kind = parse_reduction_kind(kind_name);
    ReductionArtifact artifact = artifact_from_source(kind, load_source(source_path));
    Solution claimed = load_solution(solution_path);
    auto vreport = verify(artifact.instance, claimed);
    if (!vreport.passed) {
        err << "error: solution failed verification: " << vreport.issues.front()
            << "\n";
        return kFailed;
    }
    Solution canonical = claimed;
    CanonicalReport report;
    if (kind == ReductionKind::mis_msr3) {
        std::tie(canonical, report) = canonicalize_msr3(artifact, claimed);
    } else if (kind == ReductionKind::sat_msr2) {
        std::tie(canonical, report) = canonicalize_msr2(artifact, claimed);
    } else {
        report = check_canonical(artifact, claimed);
    }
    json conditions = json::array();
    for (const auto& [name, ok] : report.conditions_satisfied)
        conditions.push_back(json{{"condition", name}, {"holds", ok}});
    emit_solution(canonical, flags, out,
                  json{{"input_length", report.input_length},
                       {"output_length", report.output_length},
                       {"operations", report.operations_applied.size()},
                       {"conditions", conditions}});
    return report.all_conditions_hold() ? kOk : kFailed;
}

int cmd_gen(const std::string& what, int n, int max_deg, int d,
            const std::vector<int>& sizes, int m, const CommonFlags& flags,
            std::ostream& out) {
    if (what == "graph-maxdeg") {
        SourceFile source;
        source.problem = gen_graph_maxdeg(n, max_deg, flags.seed);
        write_text(serialize_source(source), flags, out);
        return kOk;
    }
    if (what == "sat32") {
        SourceFile source;
        source.problem = gen_sat32(n, flags.seed);
        write_text(serialize_source(source), flags, out);
        return kOk;
    }
    if (what == "ddm") {
        SourceFile source;
        source.problem = gen_ddm(d, sizes, m, flags.seed);
        write_text(serialize_source(source), flags, out);
        return kOk;
    }
    if (what == "random-permutation-instance") {
        std::optional<int> delta;
        if (flags.delta >= 0) delta = flags.delta;
        Instance instance =
            gen_random_permutation_instance(d, n, flags.seed, delta, false);
        write_text(serialize_instance(instance), flags, out);
        return kOk;
    }
    throw input_error("unknown generator '" + what + "'");
}

int cmd_lemma_check(const std::string& kind_name, const LemmaCheckParams& params,
                    const CommonFlags& flags, std::ostream& out,
                    std::ostream& err) {
    LemmaKind kind = parse_lemma_kind(kind_name);
    LemmaCheckReport report = lemma_check(kind, params);
    if (flags.format == "json") {
        out << json{{"kind", kind_name},
                    {"trials", report.trials},
                    {"passes", report.passes},
                    {"failures", report.failures},
                    {"notes", report.notes}}
                   .dump()
            << "\n";
    } else {
        out << "lemma-check " << kind_name << ": " << report.passes << "/"
            << report.trials << " trials passed\n";
        for (const auto& note : report.notes) out << "note: " << note << "\n";
        for (const auto& failure : report.failures)
            out << "counterexample: " << failure << "\n";
    }
    if (!report.ok()) err << "error: lemma check failed\n";
    return report.ok() ? kOk : kFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"maximal strip recovery toolkit"};
    app.require_subcommand(1);
    CommonFlags flags;

    std::string instance_path, solution_path, source_path, kind_name;
    std::string witness_text, legend_path, gen_what;
    int gen_n = 6, gen_maxdeg = 3, gen_d = 2, gen_m = 4;
    std::vector<int> gen_sizes;
    LemmaCheckParams lemma_params;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--objective", flags.objective)
            ->check(CLI::IsMember({"length", "adjacency"}));
        cmd->add_option("--variant", flags.variant)
            ->check(CLI::IsMember({"msr", "cmsr"}));
        cmd->add_option("--delta", flags.delta)->check(CLI::NonNegativeNumber);
        cmd->add_option("--max-candidate-len", flags.max_candidate_len);
        cmd->add_option("--seed", flags.seed);
        cmd->add_option("--time-limit", flags.time_limit);
        cmd->add_option("--format", flags.format)
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("-o,--output", flags.output_path);
    };

    auto* solve = app.add_subcommand("solve", "exact optimum of an instance");
    solve->add_option("instance", instance_path)->required();
    add_common(solve);

    auto* approx = app.add_subcommand("approx", "2d-approximation of an instance");
    approx->add_option("instance", instance_path)->required();
    add_common(approx);

    auto* verify_cmd = app.add_subcommand("verify", "check a claimed solution");
    verify_cmd->add_option("instance", instance_path)->required();
    verify_cmd->add_option("solution", solution_path)->required();
    add_common(verify_cmd);

    auto* reduce = app.add_subcommand("reduce", "build a gadget instance");
    reduce->add_option("kind", kind_name)->required();
    reduce->add_option("source", source_path)->required();
    reduce->add_option("--legend", legend_path);
    add_common(reduce);

    auto* embed = app.add_subcommand("embed", "embed a source solution");
    embed->add_option("kind", kind_name)->required();
    embed->add_option("source", source_path)->required();
    embed->add_option("--witness", witness_text)->required();
    add_common(embed);

    auto* extract = app.add_subcommand("extract", "back-map a gadget solution");
    extract->add_option("kind", kind_name)->required();
    extract->add_option("source", source_path)->required();
    extract->add_option("solution", solution_path)->required();
    add_common(extract);

    auto* canonicalize =
        app.add_subcommand("canonicalize", "canonical form of a gadget solution");
    canonicalize->add_option("kind", kind_name)->required();
    canonicalize->add_option("source", source_path)->required();
    canonicalize->add_option("solution", solution_path)->required();
    add_common(canonicalize);

    auto* gen = app.add_subcommand("gen", "seeded random inputs");
    gen->add_option("what", gen_what)->required();
    gen->add_option("--n", gen_n);
    gen->add_option("--max-deg", gen_maxdeg);
    gen->add_option("--d", gen_d);
    gen->add_option("--sizes", gen_sizes)->delimiter(',');
    gen->add_option("--m", gen_m);
    add_common(gen);

    auto* lemma = app.add_subcommand("lemma-check", "verify construction identities");
    lemma->add_option("kind", kind_name)->required();
    lemma->add_option("--trials", lemma_params.trials);
    lemma->add_option("--max-n", lemma_params.max_n);
    add_common(lemma);

    try {
        std::vector<std::string> argv_like = args;
        argv_like.insert(argv_like.begin(), "msr");
        std::vector<const char*> argv;
        for (const auto& a : argv_like) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n";
        return kBadInput;
    }

    try {
        if (solve->parsed()) return cmd_solve(instance_path, flags, out, err);
        if (approx->parsed()) return cmd_approx(instance_path, flags, out, err);
        if (verify_cmd->parsed())
            return cmd_verify(instance_path, solution_path, flags, out, err);
        if (reduce->parsed())
            return cmd_reduce(kind_name, source_path, legend_path, flags, out);
        if (embed->parsed())
            return cmd_embed(kind_name, source_path, witness_text, flags, out);
        if (extract->parsed())
            return cmd_extract(kind_name, source_path, solution_path, flags, out, err);
        if (canonicalize->parsed())
            return cmd_canonicalize(kind_name, source_path, solution_path, flags,
                                    out, err);
        if (gen->parsed())
            return cmd_gen(gen_what, gen_n, gen_maxdeg, gen_d, gen_sizes, gen_m,
                           flags, out);
        if (lemma->parsed()) {
            lemma_params.seed = flags.seed;
            return cmd_lemma_check(kind_name, lemma_params, flags, out, err);
        }
        err << "error: no subcommand\n";
        return kBadInput;
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailed;
    }
}

}  // namespace msr
