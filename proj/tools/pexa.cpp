// pexa: weakest pre-expectations, predicate abstraction, information
// preservation and performance model checking for pGCL models.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "pexa/mdp_io.hpp"
#include "pexa/parser.hpp"
#include "pexa/report.hpp"

using namespace pexa;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitInternal = 2;
constexpr int kExitNotPreserving = 3;

struct CliError {
    int code;
    std::string message;
};

std::string read_file_or_fail(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{kExitDiagnostics, "cannot open '" + path + "'"};
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Model load_validated_model(const std::string& path) {
    Model m;
    try {
        m = parse_model(read_file_or_fail(path));
    } catch (const ParseError& e) {
        throw CliError{kExitDiagnostics, path + ":" + e.what()};
    }
    auto diags = validate_model(m);
    if (!diags.empty()) {
        std::string msg;
        for (const auto& d : diags) msg += path + ":" + diag_str(d) + "\n";
        msg.pop_back();
        throw CliError{kExitDiagnostics, msg};
    }
    return m;
}

PredicateSet load_predicates(const std::string& path) {
    PredicateSet phi;
    try {
        for (auto& [text, pred] : parse_predicate_lines(read_file_or_fail(path)))
            phi.add(text, std::move(pred));
    } catch (const ParseError& e) {
        throw CliError{kExitDiagnostics, path + ":" + e.what()};
    }
    return phi;
}

void emit(const json& doc, const json& config, bool as_json, const std::string& text) {
    if (as_json) {
        json out = doc;
        out["version"] = kVersion;
        out["config"] = config;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "# pexa " << kVersion << " " << config.dump() << "\n" << text;
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw CliError{kExitDiagnostics, "cannot write '" + path + "'"};
    out << content;
}

// ---------------------------------------------------------------------------

struct WpArgs {
    std::string model_path, post, preds_path;
    size_t fuel = WpOptions{}.loop_fuel;
    bool as_json = false;
};

int cmd_wp(const WpArgs& args) {
    Model m = load_validated_model(args.model_path);
    StateSpace space(m.decls);
    Expectation post;
    try {
        post = eval_expectation(parse_expectation(args.post), space);
    } catch (const ParseError& e) {
        throw CliError{kExitDiagnostics, std::string("post-expectation: ") + e.what()};
    }
    WpOptions opts;
    opts.loop_fuel = args.fuel;
    WpResult result;
    if (!args.preds_path.empty()) {
        Partition part = cubes(load_predicates(args.preds_path), space);
        result = wp_abs(m.program, post, part, space, opts);
    } else {
        result = wp(m.program, post, space, opts);
    }
    json config{{"command", "wp"},
                {"model", args.model_path},
                {"post", args.post},
                {"abstract", args.preds_path},
                {"fuel", args.fuel}};
    json doc = expectation_json(result.value, space);
    doc["exact"] = result.exact;
    std::ostringstream text;
    for (size_t s = 0; s < space.count(); ++s)
        text << space.valuation_str(s) << ": " << rat_str(result.value[s]) << "\n";
    if (!result.exact) text << "(approximate: loop fuel exhausted; value is a lower bound)\n";
    emit(doc, config, args.as_json, text.str());
    return kExitOk;
}

struct CheckArgs {
    std::string model_path, preds_path;
    size_t fuel = WpOptions{}.loop_fuel;
    bool as_json = false;
};

int cmd_check_ip(const CheckArgs& args) {
    Model m = load_validated_model(args.model_path);
    StateSpace space(m.decls);
    PredicateSet phi = load_predicates(args.preds_path);
    WpOptions opts;
    opts.loop_fuel = args.fuel;

    json components = json::array();
    std::ostringstream text;
    bool all_preserving = true;
    auto comps = demonic_components(m.program);
    for (const ProgramPtr& comp : comps) {
        if (has_demonic_choice(comp))
            throw CliError{kExitDiagnostics,
                           "nested demonic choice cannot be decomposed into deterministic "
                           "components; restructure the model so demonic choice is top-level"};
        IpReport rep = check_info_preserving(comp, phi, space, opts);
        all_preserving = all_preserving && rep.preserving;
        json c = ip_report_json(rep, space);
        c["component"] = print_program(comp);
        components.push_back(c);
        text << (comps.size() > 1 ? "component " + print_program(comp) + ": " : "")
             << (rep.preserving ? "preserving" : "not-preserving") << "\n";
        if (rep.witness) {
            text << "  witness " << (rep.witness->is_cube ? "cube" : "predicate") << ": "
                 << rep.witness->text << "\n";
            for (const auto& d : rep.witness->differing)
                text << "    " << space.valuation_str(d.state) << ": wp = " << rat_str(d.wp_value)
                     << ", cubed = " << rat_str(d.cubed_value) << "\n";
        }
    }
    json config{{"command", "check ip"},
                {"model", args.model_path},
                {"predicates", args.preds_path},
                {"fuel", args.fuel}};
    json doc{{"verdict", all_preserving ? "preserving" : "not-preserving"},
             {"components", components}};
    emit(doc, config, args.as_json, text.str());
    return all_preserving ? kExitOk : kExitNotPreserving;
}

int cmd_check_di(const CheckArgs& args) {
    Model m = load_validated_model(args.model_path);
    StateSpace space(m.decls);
    WpOptions opts;
    opts.loop_fuel = args.fuel;
    DiReport rep;
    try {
        rep = check_data_independent(m.program, space, opts);
    } catch (const ModelError& e) {
        throw CliError{kExitDiagnostics, e.what()};
    }
    json config{{"command", "check di"}, {"model", args.model_path}, {"fuel", args.fuel}};
    std::ostringstream text;
    text << (rep.independent ? "data-independent" : "not-data-independent") << "\n";
    for (size_t i = 0; i < rep.components.size(); ++i) {
        text << "component " << rep.component_texts[i] << ": "
             << (rep.components[i].preserving ? "preserving" : "not-preserving") << "\n";
        if (rep.components[i].witness)
            text << "  witness: " << rep.components[i].witness->text << "\n";
    }
    emit(di_report_json(rep, space), config, args.as_json, text.str());
    return rep.independent ? kExitOk : kExitNotPreserving;
}

struct McArgs {
    std::string model_path, query, preds_path;
    bool curve = false;
    bool as_json = false;
    size_t action_cap = MdpOptions{}.max_actions_per_state;
};

int cmd_mc(const McArgs& args) {
    Model m = load_validated_model(args.model_path);
    StateSpace space(m.decls);
    Query q;
    try {
        q = parse_query(args.query);
    } catch (const ParseError& e) {
        throw CliError{kExitDiagnostics, std::string("query: ") + e.what()};
    }
    MdpOptions mopts;
    mopts.max_actions_per_state = args.action_cap;
    Mdp mdp;
    try {
        mdp = extract_mdp(m, space, mopts);
    } catch (const ModelError& e) {
        throw CliError{kExitDiagnostics, e.what()};
    }
    std::vector<bool> target(mdp.num_states, false);
    for (size_t s = 0; s < space.count(); ++s) target[s] = eval_bexpr(q.target, space, s);

    json config{{"command", "mc"},
                {"model", args.model_path},
                {"query", args.query},
                {"quotient", args.preds_path},
                {"curve", args.curve}};

    std::optional<Partition> part;
    if (!args.preds_path.empty()) {
        part = cubes(load_predicates(args.preds_path), space);
        std::vector<uint32_t> blocks = part->cube_of_state;
        uint32_t nblocks = static_cast<uint32_t>(part->cubes.size());
        // extra states (abort sink) become their own blocks
        for (uint32_t s = static_cast<uint32_t>(space.count()); s < mdp.num_states; ++s)
            blocks.push_back(nblocks++);
        std::vector<bool> lifted(nblocks, false);
        for (uint32_t s = 0; s < mdp.num_states; ++s)
            if (target[s]) lifted[blocks[s]] = true;
        // the target must be at cube granularity
        for (uint32_t s = 0; s < mdp.num_states; ++s)
            if (lifted[blocks[s]] != target[s])
                throw CliError{kExitDiagnostics,
                               "the query target is not constant on the abstraction's cubes"};
        mdp = quotient_mdp(mdp, blocks, nblocks);
        target = lifted;
    }

    auto state_name = [&](uint32_t s) {
        return part ? "cube " + std::to_string(s) : space.valuation_str(s);
    };

    std::ostringstream text;
    json doc;
    if (q.kind == Query::Kind::BoundedUntil) {
        size_t horizon = static_cast<size_t>(q.horizon);
        if (args.curve) {
            std::ostringstream csv;
            csv << "T";
            size_t ncols = part ? part->cubes.size() : space.count();
            for (size_t i = 0; i < ncols; ++i) csv << "," << state_name(static_cast<uint32_t>(i));
            csv << "\n";
            csv.precision(12);
            for (size_t t = 0; t <= horizon; ++t) {
                QueryResult r = pbounded(mdp, target, t, q.mode);
                csv << t;
                for (size_t i = 0; i < ncols; ++i) csv << "," << rat_double(r.values[i]);
                csv << "\n";
            }
            std::cout << "# pexa " << kVersion << " " << config.dump() << "\n" << csv.str();
            return kExitOk;
        }
        QueryResult r = pbounded(mdp, target, horizon, q.mode);
        doc = json{{"query", print_query(q)}, {"kind", "bounded-until"}};
        doc["result"] = part ? query_result_json(r, mdp.initial) : query_result_json(r, space);
        for (uint32_t s : mdp.initial)
            text << state_name(s) << ": " << rat_str(r.values[s]) << "\n";
    } else {
        RewardStructure rewards = unit_rewards(mdp, target);
        QueryResult r = expected_reward(mdp, target, rewards, q.mode);
        doc = json{{"query", print_query(q)}, {"kind", "expected-reward"}};
        doc["result"] = part ? query_result_json(r, mdp.initial) : query_result_json(r, space);
        for (uint32_t s : mdp.initial)
            text << state_name(s) << ": " << (r.infinite[s] ? "inf" : rat_str(r.values[s]))
                 << "\n";
    }
    emit(doc, config, args.as_json, text.str());
    return kExitOk;
}

struct ExportArgs {
    std::string model_path, format = "json", out_base, preds_path;
};

int cmd_export(const ExportArgs& args) {
    Model m = load_validated_model(args.model_path);
    StateSpace space(m.decls);
    Mdp mdp;
    try {
        mdp = extract_mdp(m, space);
    } catch (const ModelError& e) {
        throw CliError{kExitDiagnostics, e.what()};
    }
    if (!args.preds_path.empty()) {
        Partition part = cubes(load_predicates(args.preds_path), space);
        std::vector<uint32_t> blocks = part.cube_of_state;
        uint32_t nblocks = static_cast<uint32_t>(part.cubes.size());
        for (uint32_t s = static_cast<uint32_t>(space.count()); s < mdp.num_states; ++s)
            blocks.push_back(nblocks++);
        mdp = quotient_mdp(mdp, blocks, nblocks);
    }
    if (args.format == "json") {
        json doc = mdp_to_json(mdp);
        doc["version"] = kVersion;
        doc["model"] = args.model_path;
        if (args.out_base.empty()) std::cout << doc.dump(2) << "\n";
        else write_file(args.out_base + ".json", doc.dump(2) + "\n");
    } else if (args.format == "prism") {
        if (args.out_base.empty()) {
            std::cout << mdp_to_prism_tra(mdp);
        } else {
            write_file(args.out_base + ".tra", mdp_to_prism_tra(mdp));
            write_file(args.out_base + ".lab", mdp_to_prism_lab(mdp));
        }
    } else {
        throw CliError{kExitDiagnostics, "unknown format '" + args.format + "'"};
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// rabin subcommands

struct RabinArgs {
    int n = -1;
    int a = -1, b = -1;
    size_t traces = 1;
    std::string scheduler = "uniform";
    uint64_t seed = 0;
    size_t max_steps = 100000;
    std::string jsonl_path;
    long cap = 33;
    size_t depth = SIZE_MAX;
    size_t tmax = 40;
    bool sweep = false;
    bool as_json = false;
    std::string csv_path;
    std::string export_base;
    std::string export_format = "json";
};

std::vector<std::pair<unsigned, unsigned>> resolve_splits(const RabinArgs& args) {
    if (args.a >= 0 || args.b >= 0) {
        unsigned a = args.a < 0 ? 0 : static_cast<unsigned>(args.a);
        unsigned b = args.b < 0 ? 0 : static_cast<unsigned>(args.b);
        return {{a, b}};
    }
    if (args.n < 0) throw CliError{kExitDiagnostics, "specify --n or --a/--b"};
    std::vector<std::pair<unsigned, unsigned>> splits;
    for (unsigned a = 0; a <= static_cast<unsigned>(args.n); ++a)
        splits.push_back({a, static_cast<unsigned>(args.n) - a});
    return splits;
}

// Model-building subcommands analyse one split; with --n alone, the balanced
// one.
std::pair<unsigned, unsigned> resolve_single_split(const RabinArgs& args) {
    if (args.a >= 0 || args.b >= 0) return resolve_splits(args).front();
    if (args.n < 0) throw CliError{kExitDiagnostics, "specify --n or --a/--b"};
    unsigned n = static_cast<unsigned>(args.n);
    return {n - n / 2, n / 2};
}

rabin::SchedulerPolicy parse_scheduler(const std::string& name) {
    if (name == "uniform") return rabin::SchedulerPolicy::UniformRandom;
    if (name == "round-robin") return rabin::SchedulerPolicy::RoundRobin;
    if (name == "adversarial") return rabin::SchedulerPolicy::AdversarialHeuristic;
    throw CliError{kExitDiagnostics, "unknown scheduler '" + name + "'"};
}

int cmd_rabin_simulate(const RabinArgs& args) {
    auto splits = resolve_splits(args);
    rabin::SchedulerPolicy policy = parse_scheduler(args.scheduler);
    size_t board_diff_violations = 0, level_violations = 0, conservation_violations = 0,
           unterminated = 0;
    long max_board_diff = 0;
    std::ofstream jsonl;
    if (!args.jsonl_path.empty()) {
        jsonl.open(args.jsonl_path);
        if (!jsonl) throw CliError{kExitDiagnostics, "cannot write '" + args.jsonl_path + "'"};
    }
    for (size_t i = 0; i < args.traces; ++i) {
        auto [a, b] = splits[i % splits.size()];
        rabin::Trace t = rabin::simulate(a, b, policy, args.seed + i, args.max_steps);
        if (t.max_board_diff > 2) ++board_diff_violations;
        if (t.max_level_diff > 1) ++level_violations;
        if (!t.tourist_conservation) ++conservation_violations;
        if (!t.terminated) ++unterminated;
        max_board_diff = std::max(max_board_diff, t.max_board_diff);
        if (jsonl.is_open())
            for (const auto& s : t.states) jsonl << rabin_state_json(s).dump() << "\n";
    }
    json config{{"command", "rabin simulate"}, {"traces", args.traces},
                {"scheduler", args.scheduler}, {"seed", args.seed},
                {"max_steps", args.max_steps}};
    json doc{{"traces", args.traces},
             {"board_diff_gt2", board_diff_violations},
             {"max_board_diff", max_board_diff},
             {"level_adjacency_violations", level_violations},
             {"conservation_violations", conservation_violations},
             {"unterminated", unterminated}};
    std::ostringstream text;
    text << "traces: " << args.traces << "\n"
         << "|L-R| > 2 in " << board_diff_violations << " traces (max " << max_board_diff
         << "); level adjacency violations: " << level_violations << "\n"
         << "conservation violations: " << conservation_violations
         << "; unterminated: " << unterminated << "\n";
    emit(doc, config, args.as_json, text.str());
    return kExitOk;
}

int emit_model_queries(const Mdp& mdp, const std::vector<Rat>* sweep_reward,
                       const RabinArgs& args, const json& config, const std::string& kind,
                       const std::string& preamble) {
    std::vector<bool> done = mdp.label_set("done");
    json doc{{"model", kind}, {"states", mdp.num_states}};
    std::ostringstream text;
    text << preamble << kind << " model: " << mdp.num_states << " states\n";
    std::ostringstream csv;
    csv << "T,pmin,pmax\n";
    csv.precision(12);
    json curve = json::array();
    for (size_t t = 0; t <= args.tmax; ++t) {
        Rat pmin = pbounded(mdp, done, t, Query::Mode::Min).values[0];
        Rat pmax = pbounded(mdp, done, t, Query::Mode::Max).values[0];
        csv << t << "," << rat_double(pmin) << "," << rat_double(pmax) << "\n";
        curve.push_back({{"T", t}, {"pmin", rat_str(pmin)}, {"pmax", rat_str(pmax)}});
    }
    doc["curve"] = curve;
    RewardStructure rewards =
        sweep_reward ? RewardStructure{*sweep_reward} : unit_rewards(mdp, done);
    QueryResult rmin = expected_reward(mdp, done, rewards, Query::Mode::Min);
    QueryResult rmax = expected_reward(mdp, done, rewards, Query::Mode::Max);
    auto fmt = [&](const QueryResult& r) {
        return r.infinite[mdp.initial[0]] ? std::string("inf") : rat_str(r.values[mdp.initial[0]]);
    };
    doc["rmin"] = fmt(rmin);
    doc["rmax"] = fmt(rmax);
    text << "Rmin = " << fmt(rmin) << ", Rmax = " << fmt(rmax)
         << (sweep_reward ? " (per service round)" : " (per served tourist)") << "\n";
    if (!args.csv_path.empty()) write_file(args.csv_path, csv.str());
    else text << csv.str();
    emit(doc, config, args.as_json, text.str());
    return kExitOk;
}

int cmd_rabin_truncated(const RabinArgs& args) {
    auto [a, b] = resolve_single_split(args);
    rabin::TruncatedOptions opts;
    opts.max_depth = args.depth;
    rabin::TruncatedModel tm = rabin::truncated_mdp(a, b, args.cap, opts);
    json config{{"command", "rabin truncated"}, {"a", a}, {"b", b},
                {"cap", args.cap},              {"tmax", args.tmax},
                {"overflow_reachable", tm.sink_reachable}};
    if (!args.export_base.empty()) {
        if (args.export_format == "prism") {
            write_file(args.export_base + ".tra", mdp_to_prism_tra(tm.mdp));
            write_file(args.export_base + ".lab", mdp_to_prism_lab(tm.mdp));
        } else {
            write_file(args.export_base + ".json", mdp_to_json(tm.mdp).dump(2) + "\n");
        }
    }
    std::string preamble =
        tm.sink_reachable
            ? "warning: overflow sink reachable; unbounded results are truncated\n"
            : "";
    return emit_model_queries(tm.mdp, nullptr, args, config, "truncated", preamble);
}

int cmd_rabin_abstract(const RabinArgs& args) {
    auto [a, b] = resolve_single_split(args);
    rabin::AbstractModel am = rabin::abstract_mdp(a, b, args.sweep);
    json config{{"command", "rabin abstract"}, {"a", a}, {"b", b},
                {"sweep", args.sweep},         {"tmax", args.tmax}};
    if (!args.export_base.empty()) {
        if (args.export_format == "prism") {
            write_file(args.export_base + ".tra", mdp_to_prism_tra(am.mdp));
            write_file(args.export_base + ".lab", mdp_to_prism_lab(am.mdp));
        } else {
            write_file(args.export_base + ".json", mdp_to_json(am.mdp).dump(2) + "\n");
        }
    }
    return emit_model_queries(am.mdp, args.sweep ? &am.sweep_reward : nullptr, args, config,
                              "abstract", "");
}

int cmd_rabin_paper_queries(const RabinArgs& args) {
    auto splits = resolve_splits(args);
    json config{{"command", "rabin paper-queries"}, {"tmax", args.tmax}};
    json all = json::array();
    std::ostringstream text;
    std::vector<rabin::PaperQueriesReport> reports;
    for (auto [a, b] : splits) reports.push_back(rabin::run_paper_queries(a, b, args.tmax, true));

    // Demonic envelope over the initial splits.
    std::ostringstream csv;
    csv << "T,pmin,pmax\n";
    csv.precision(12);
    for (size_t t = 0; t <= args.tmax; ++t) {
        Rat pmin = reports[0].curve[t].pmin;
        Rat pmax = reports[0].curve[t].pmax;
        for (const auto& r : reports) {
            pmin = std::min(pmin, r.curve[t].pmin);
            pmax = std::max(pmax, r.curve[t].pmax);
        }
        csv << t << "," << rat_double(pmin) << "," << rat_double(pmax) << "\n";
    }
    auto fmt = [](bool inf, const Rat& v) { return inf ? std::string("inf") : rat_str(v); };
    text << "split   per-serve Rmin/Rmax   per-round Rmin/Rmax   abstract states\n";
    for (const auto& r : reports) {
        all.push_back(rabin_report_json(r));
        text << "(" << r.split_left << "," << r.split_right << ")   "
             << fmt(r.per_serve.min_infinite, r.per_serve.min_value) << " / "
             << fmt(r.per_serve.max_infinite, r.per_serve.max_value) << "   "
             << fmt(r.sweep->min_infinite, r.sweep->min_value) << " / "
             << fmt(r.sweep->max_infinite, r.sweep->max_value) << "   " << r.abstract_states
             << "\n";
    }
    json doc{{"splits", all}};
    if (!args.csv_path.empty()) {
        write_file(args.csv_path, csv.str());
        text << "curve written to " << args.csv_path << "\n";
    } else {
        text << csv.str();
    }
    emit(doc, config, args.as_json, text.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakest pre-expectations, predicate abstraction and performance model "
                 "checking for pGCL models"};
    app.require_subcommand(1);

    WpArgs wp_args;
    auto* wp_cmd = app.add_subcommand("wp", "weakest pre-expectation of a post-expectation");
    wp_cmd->add_option("model", wp_args.model_path, "model file")->required();
    wp_cmd->add_option("--post", wp_args.post, "post-expectation, e.g. \"[x = 1]\"")->required();
    wp_cmd->add_option("--abstract", wp_args.preds_path,
                       "predicate file: compute the abstract transformer instead");
    wp_cmd->add_option("--fuel", wp_args.fuel, "loop fixpoint iteration bound");
    wp_cmd->add_flag("--json", wp_args.as_json, "machine-readable output");

    CheckArgs ip_args, di_args;
    auto* check_cmd = app.add_subcommand("check", "abstraction quality checks");
    check_cmd->require_subcommand(1);
    auto* ip_cmd = check_cmd->add_subcommand("ip", "information preservation");
    ip_cmd->add_option("model", ip_args.model_path, "model file")->required();
    ip_cmd->add_option("predicates", ip_args.preds_path, "predicate file")->required();
    ip_cmd->add_option("--fuel", ip_args.fuel, "loop fixpoint iteration bound");
    ip_cmd->add_flag("--json", ip_args.as_json, "machine-readable output");
    auto* di_cmd = check_cmd->add_subcommand("di", "data independence");
    di_cmd->add_option("model", di_args.model_path, "model file")->required();
    di_cmd->add_option("--fuel", di_args.fuel, "loop fixpoint iteration bound");
    di_cmd->add_flag("--json", di_args.as_json, "machine-readable output");

    McArgs mc_args;
    auto* mc_cmd = app.add_subcommand("mc", "model-check a loop-form model");
    mc_cmd->add_option("model", mc_args.model_path, "model file")->required();
    mc_cmd->add_option("--query", mc_args.query,
                       "e.g. \"Pmin=? [true U<=10 (x = 0)]\" or \"Rmax=? [F (x = 0)]\"")
        ->required();
    mc_cmd->add_option("--quotient", mc_args.preds_path, "predicate file: analyse the quotient");
    mc_cmd->add_flag("--curve", mc_args.curve, "sweep horizons 0..T to CSV");
    mc_cmd->add_option("--action-cap", mc_args.action_cap, "max actions per state");
    mc_cmd->add_flag("--json", mc_args.as_json, "machine-readable output");

    ExportArgs export_args;
    auto* export_cmd = app.add_subcommand("export-mdp", "export the operational MDP");
    export_cmd->add_option("model", export_args.model_path, "model file")->required();
    export_cmd->add_option("--format", export_args.format, "json or prism");
    export_cmd->add_option("-o,--output", export_args.out_base, "output base name");
    export_cmd->add_option("--quotient", export_args.preds_path, "export the quotient instead");

    RabinArgs rabin_args;
    auto* rabin_cmd = app.add_subcommand("rabin", "choice-coordination case study");
    rabin_cmd->require_subcommand(1);
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--n", rabin_args.n, "total tourists (all splits)");
        cmd->add_option("--a", rabin_args.a, "tourists starting left");
        cmd->add_option("--b", rabin_args.b, "tourists starting right");
        cmd->add_flag("--json", rabin_args.as_json, "machine-readable output");
    };
    auto* sim_cmd = rabin_cmd->add_subcommand("simulate", "execute the concrete protocol");
    add_common(sim_cmd);
    sim_cmd->add_option("--traces", rabin_args.traces, "number of traces");
    sim_cmd->add_option("--scheduler", rabin_args.scheduler,
                        "uniform | round-robin | adversarial");
    sim_cmd->add_option("--seed", rabin_args.seed, "base random seed");
    sim_cmd->add_option("--max-steps", rabin_args.max_steps, "per-trace step bound");
    sim_cmd->add_option("--jsonl", rabin_args.jsonl_path, "write visited states as JSON lines");
    auto* trunc_cmd =
        rabin_cmd->add_subcommand("truncated", "bounded-exact explicit concrete model");
    add_common(trunc_cmd);
    trunc_cmd->add_option("--cap", rabin_args.cap, "board value cap");
    trunc_cmd->add_option("--depth", rabin_args.depth, "exploration depth limit");
    trunc_cmd->add_option("--tmax", rabin_args.tmax, "curve horizon");
    trunc_cmd->add_option("--csv", rabin_args.csv_path, "write the curve CSV here");
    trunc_cmd->add_option("--export", rabin_args.export_base, "export the MDP (base name)");
    trunc_cmd->add_option("--export-format", rabin_args.export_format, "json or prism");
    auto* abs_cmd = rabin_cmd->add_subcommand("abstract", "slot-abstraction model");
    add_common(abs_cmd);
    abs_cmd->add_option("--tmax", rabin_args.tmax, "curve horizon");
    abs_cmd->add_flag("--sweep", rabin_args.sweep, "reward per service round instead of per serve");
    abs_cmd->add_option("--csv", rabin_args.csv_path, "write the curve CSV here");
    abs_cmd->add_option("--export", rabin_args.export_base, "export the MDP (base name)");
    abs_cmd->add_option("--export-format", rabin_args.export_format, "json or prism");
    auto* paper_cmd = rabin_cmd->add_subcommand(
        "paper-queries", "convergence curve and expected steps under both reward conventions");
    add_common(paper_cmd);
    paper_cmd->add_option("--tmax", rabin_args.tmax, "curve horizon");
    paper_cmd->add_option("--csv", rabin_args.csv_path, "write the envelope curve CSV here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (wp_cmd->parsed()) return cmd_wp(wp_args);
        if (ip_cmd->parsed()) return cmd_check_ip(ip_args);
        if (di_cmd->parsed()) return cmd_check_di(di_args);
        if (mc_cmd->parsed()) return cmd_mc(mc_args);
        if (export_cmd->parsed()) return cmd_export(export_args);
        if (sim_cmd->parsed()) return cmd_rabin_simulate(rabin_args);
        if (trunc_cmd->parsed()) return cmd_rabin_truncated(rabin_args);
        if (abs_cmd->parsed()) return cmd_rabin_abstract(rabin_args);
        if (paper_cmd->parsed()) return cmd_rabin_paper_queries(rabin_args);
        return kExitInternal;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiagnostics;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDiagnostics;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
