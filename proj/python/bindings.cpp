// Python bindings: the main operations, string-oriented. Models, predicates
// and queries are passed as source text; results come back as plain python
// objects mirroring the CLI's JSON documents.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pexa/mdp_io.hpp"
#include "pexa/parser.hpp"
#include "pexa/report.hpp"

namespace py = pybind11;
using namespace pexa;
using nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return py::none();
        case json::value_t::boolean: return py::bool_(j.get<bool>());
        case json::value_t::number_integer: return py::int_(j.get<long long>());
        case json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case json::value_t::number_float: return py::float_(j.get<double>());
        case json::value_t::string: return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& item : j) out.append(json_to_py(item));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
            return out;
        }
        default: return py::none();
    }
}

Model parse_and_validate(const std::string& text) {
    Model m = parse_model(text);
    auto diags = validate_model(m);
    if (!diags.empty()) throw ModelError(diag_str(diags.front()));
    return m;
}

PredicateSet predicates_from_text(const std::string& text) {
    PredicateSet phi;
    for (auto& [t, p] : parse_predicate_lines(text)) phi.add(t, std::move(p));
    return phi;
}

py::object py_wp(const std::string& model_text, const std::string& post_text,
                 const std::string& predicates_text, size_t fuel) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    Expectation post = eval_expectation(parse_expectation(post_text), space);
    WpOptions opts;
    opts.loop_fuel = fuel;
    WpResult result;
    if (!predicates_text.empty()) {
        Partition part = cubes(predicates_from_text(predicates_text), space);
        result = wp_abs(m.program, post, part, space, opts);
    } else {
        result = wp(m.program, post, space, opts);
    }
    json doc = expectation_json(result.value, space);
    doc["exact"] = result.exact;
    return json_to_py(doc);
}

py::object py_wp_bounded(const std::string& model_text, size_t k) {
    Model m = parse_and_validate(model_text);
    if (!m.program || m.program->kind != Program::Kind::Loop)
        throw ModelError("wp_bounded expects a loop-form model");
    StateSpace space(m.decls);
    Expectation ones(space.count(), Rat(1));
    WpResult result = wp_bounded_loop(m.program->guard, m.program->left, ones, k, space);
    json doc = expectation_json(result.value, space);
    doc["exact"] = result.exact;
    return json_to_py(doc);
}

py::object py_validate(const std::string& model_text) {
    Model m = parse_model(model_text);
    return json_to_py(diagnostics_json(validate_model(m)));
}

py::object py_cubes(const std::string& model_text, const std::string& predicates_text) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    PredicateSet phi = predicates_from_text(predicates_text);
    return json_to_py(partition_json(cubes(phi, space), phi, space));
}

py::object py_check_ip(const std::string& model_text, const std::string& predicates_text) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    PredicateSet phi = predicates_from_text(predicates_text);
    json components = json::array();
    bool all = true;
    for (const ProgramPtr& comp : demonic_components(m.program)) {
        IpReport rep = check_info_preserving(comp, phi, space);
        all = all && rep.preserving;
        json c = ip_report_json(rep, space);
        c["component"] = print_program(comp);
        components.push_back(c);
    }
    return json_to_py(
        json{{"verdict", all ? "preserving" : "not-preserving"}, {"components", components}});
}

py::object py_check_di(const std::string& model_text) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    return json_to_py(di_report_json(check_data_independent(m.program, space), space));
}

py::object py_mc(const std::string& model_text, const std::string& query_text,
                 const std::string& predicates_text) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    Query q = parse_query(query_text);
    Mdp mdp = extract_mdp(m, space);
    std::vector<bool> target(mdp.num_states, false);
    for (size_t s = 0; s < space.count(); ++s) target[s] = eval_bexpr(q.target, space, s);
    bool quotiented = !predicates_text.empty();
    if (quotiented) {
        Partition part = cubes(predicates_from_text(predicates_text), space);
        std::vector<uint32_t> blocks = part.cube_of_state;
        uint32_t nblocks = static_cast<uint32_t>(part.cubes.size());
        for (uint32_t s = static_cast<uint32_t>(space.count()); s < mdp.num_states; ++s)
            blocks.push_back(nblocks++);
        std::vector<bool> lifted(nblocks, false);
        for (uint32_t s = 0; s < mdp.num_states; ++s)
            if (target[s]) lifted[blocks[s]] = true;
        for (uint32_t s = 0; s < mdp.num_states; ++s)
            if (lifted[blocks[s]] != target[s])
                throw ModelError("the query target is not constant on the abstraction's cubes");
        mdp = quotient_mdp(mdp, blocks, nblocks);
        target = lifted;
    }
    QueryResult r;
    if (q.kind == Query::Kind::BoundedUntil) {
        r = pbounded(mdp, target, static_cast<size_t>(q.horizon), q.mode);
    } else {
        r = expected_reward(mdp, target, unit_rewards(mdp, target), q.mode);
    }
    json doc{{"query", print_query(q)}};
    doc["result"] = quotiented ? query_result_json(r, mdp.initial) : query_result_json(r, space);
    return json_to_py(doc);
}

py::object py_export_mdp(const std::string& model_text) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    return json_to_py(mdp_to_json(extract_mdp(m, space)));
}

std::string py_export_mdp_prism(const std::string& model_text) {
    Model m = parse_and_validate(model_text);
    StateSpace space(m.decls);
    return mdp_to_prism_tra(extract_mdp(m, space));
}

rabin::SchedulerPolicy scheduler_from_name(const std::string& name) {
    if (name == "uniform") return rabin::SchedulerPolicy::UniformRandom;
    if (name == "round-robin") return rabin::SchedulerPolicy::RoundRobin;
    if (name == "adversarial") return rabin::SchedulerPolicy::AdversarialHeuristic;
    throw ModelError("unknown scheduler '" + name + "'");
}

py::object py_rabin_simulate(unsigned a, unsigned b, const std::string& scheduler, uint64_t seed,
                             size_t max_steps) {
    return json_to_py(
        rabin_trace_json(rabin::simulate(a, b, scheduler_from_name(scheduler), seed, max_steps)));
}

py::object py_rabin_paper_queries(unsigned a, unsigned b, size_t tmax, bool sweep) {
    return json_to_py(rabin_report_json(rabin::run_paper_queries(a, b, tmax, sweep)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "weakest pre-expectations, predicate abstraction and performance model checking "
              "for pGCL models";
    m.attr("__version__") = kVersion;

    py::register_exception<ParseError>(m, "PgclParseError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "PgclModelError", PyExc_ValueError);

    m.def("wp", &py_wp, py::arg("model"), py::arg("post"), py::arg("predicates") = "",
          py::arg("fuel") = WpOptions{}.loop_fuel,
          "Weakest pre-expectation of a post-expectation; with `predicates`, its "
          "greatest cube-constant lower bound.");
    m.def("wp_bounded", &py_wp_bounded, py::arg("model"), py::arg("k"),
          "Probability that a loop-form model leaves its loop within k iterations.");
    m.def("validate", &py_validate, py::arg("model"), "Static diagnostics for a model.");
    m.def("cubes", &py_cubes, py::arg("model"), py::arg("predicates"),
          "The state-space partition induced by a predicate set.");
    m.def("check_ip", &py_check_ip, py::arg("model"), py::arg("predicates"),
          "Information-preservation report, one entry per deterministic component.");
    m.def("check_di", &py_check_di, py::arg("model"),
          "Data-independence report over all pairwise variable comparisons.");
    m.def("mc", &py_mc, py::arg("model"), py::arg("query"), py::arg("predicates") = "",
          "Model-check a bounded-until or expected-reward query on a loop-form model, "
          "optionally on its quotient.");
    m.def("export_mdp", &py_export_mdp, py::arg("model"),
          "Operational MDP of a loop-form model as a JSON-like dict.");
    m.def("export_mdp_prism", &py_export_mdp_prism, py::arg("model"),
          "Operational MDP in the explicit transition text format.");
    m.def("rabin_simulate", &py_rabin_simulate, py::arg("a"), py::arg("b"),
          py::arg("scheduler") = "uniform", py::arg("seed") = 0, py::arg("max_steps") = 100000,
          "One concrete run of the choice-coordination protocol.");
    m.def("rabin_paper_queries", &py_rabin_paper_queries, py::arg("a"), py::arg("b"),
          py::arg("tmax") = 20, py::arg("sweep") = true,
          "Convergence curve and expected steps on the slot abstraction.");
}
