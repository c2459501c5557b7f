#include "pexa/report.hpp"

namespace pexa {

using nlohmann::json;

json expectation_json(const Expectation& e, const StateSpace& space) {
    json values = json::array();
    for (size_t s = 0; s < e.size(); ++s) {
        json state = json::object();
        for (size_t v = 0; v < space.var_count(); ++v)
            state[space.decl(v).name] = space.value(s, v);
        values.push_back({{"state", state}, {"value", rat_str(e[s])}});
    }
    return json{{"values", values}};
}

json diagnostics_json(const std::vector<Diagnostic>& diags) {
    json arr = json::array();
    for (const Diagnostic& d : diags)
        arr.push_back({{"line", d.loc.line},
                       {"col", d.loc.col},
                       {"severity", d.severity == Severity::Error ? "error" : "warning"},
                       {"message", d.message}});
    return arr;
}

json partition_json(const Partition& part, const PredicateSet& phi, const StateSpace& space) {
    json arr = json::array();
    for (size_t ci = 0; ci < part.cubes.size(); ++ci) {
        const Cube& c = part.cubes[ci];
        json states = json::array();
        for (uint32_t s : c.states) states.push_back(space.valuation_str(s));
        arr.push_back({{"cube", part.cube_str(ci, phi)},
                       {"truth", std::vector<int>(c.truth.begin(), c.truth.end())},
                       {"states", states}});
    }
    return json{{"cubes", arr}};
}

json ip_report_json(const IpReport& report, const StateSpace& space) {
    json j;
    j["verdict"] = report.preserving ? "preserving" : "not-preserving";
    json detail = json::array();
    for (const auto& [text, ok] : report.predicate_detail)
        detail.push_back({{"predicate", text}, {"wp_cubed", ok}});
    j["predicates"] = detail;
    if (report.witness) {
        const IpWitness& w = *report.witness;
        json diffs = json::array();
        for (const IpDifference& d : w.differing)
            diffs.push_back({{"state", space.valuation_str(d.state)},
                             {"wp", rat_str(d.wp_value)},
                             {"cubed", rat_str(d.cubed_value)}});
        json witness{{"expression", w.text},
                     {"kind", w.is_cube ? "cube" : "predicate"},
                     {"differing", diffs}};
        if (w.is_cube) witness["truth"] = std::vector<int>(w.cube_truth.begin(), w.cube_truth.end());
        j["witness"] = witness;
    }
    return j;
}

json di_report_json(const DiReport& report, const StateSpace& space) {
    json j;
    j["verdict"] = report.independent ? "data-independent" : "not-data-independent";
    j["psi"] = report.psi.texts;
    json comps = json::array();
    for (size_t i = 0; i < report.components.size(); ++i) {
        json c = ip_report_json(report.components[i], space);
        c["component"] = report.component_texts[i];
        comps.push_back(c);
    }
    j["components"] = comps;
    return j;
}

json query_result_json(const QueryResult& result, const StateSpace& space) {
    // Auxiliary states beyond the enumerated space (an abort sink) carry no
    // valuation and are not reported.
    json values = json::array();
    for (uint32_t s = 0; s < result.values.size() && s < space.count(); ++s) {
        json entry;
        entry["state"] = space.valuation_str(s);
        if (!result.infinite.empty() && result.infinite[s]) entry["value"] = "inf";
        else entry["value"] = rat_str(result.values[s]);
        values.push_back(entry);
    }
    return json{{"values", values},
                {"exact", result.exact},
                {"iterations", result.iterations},
                {"residual", result.residual}};
}

json query_result_json(const QueryResult& result, const std::vector<uint32_t>& states) {
    json j = json{{"exact", result.exact},
                  {"iterations", result.iterations},
                  {"residual", result.residual}};
    json values = json::array();
    for (uint32_t s : states) {
        json entry;
        entry["state"] = s;
        if (!result.infinite.empty() && result.infinite[s]) entry["value"] = "inf";
        else entry["value"] = rat_str(result.values[s]);
        values.push_back(entry);
    }
    j["values"] = values;
    return j;
}

json refinement_json(const RefinementVerdict& verdict, const StateSpace& space) {
    json j;
    j["verdict"] = verdict.refuted ? "refuted" : "not-refuted";
    if (verdict.witness) {
        j["witness"] = {{"expectation", verdict.witness->expectation_text},
                        {"state", space.valuation_str(verdict.witness->state)},
                        {"wp_left", rat_str(verdict.witness->wp_left)},
                        {"wp_right", rat_str(verdict.witness->wp_right)}};
    }
    return j;
}

json rabin_state_json(const rabin::ConcreteState& s) {
    return json{{"lout", s.lout},         {"rout", s.rout},           {"lin", s.lin},
                {"rin", s.rin},           {"L", s.board_left},        {"R", s.board_right}};
}

json rabin_trace_json(const rabin::Trace& trace) {
    json states = json::array();
    for (const auto& s : trace.states) states.push_back(rabin_state_json(s));
    return json{{"steps", trace.steps},
                {"terminated", trace.terminated},
                {"consensus", trace.consensus},
                {"max_board_diff", trace.max_board_diff},
                {"max_level_diff", trace.max_level_diff},
                {"tourist_conservation", trace.tourist_conservation},
                {"states", states}};
}

json rabin_report_json(const rabin::PaperQueriesReport& report) {
    json curve = json::array();
    for (const auto& p : report.curve)
        curve.push_back({{"T", p.horizon},
                         {"pmin", rat_str(p.pmin)},
                         {"pmax", rat_str(p.pmax)},
                         {"pmin_float", rat_double(p.pmin)},
                         {"pmax_float", rat_double(p.pmax)}});
    auto reward_json = [](const rabin::RewardSummary& r) {
        return json{{"rmin", r.min_infinite ? json("inf") : json(rat_str(r.min_value))},
                    {"rmax", r.max_infinite ? json("inf") : json(rat_str(r.max_value))}};
    };
    json j{{"tourists", report.tourists},
           {"split", {report.split_left, report.split_right}},
           {"abstract_states", report.abstract_states},
           {"curve", curve},
           {"rewards_per_serve", reward_json(report.per_serve)}};
    if (report.sweep) j["rewards_per_round"] = reward_json(*report.sweep);
    return j;
}

}  // namespace pexa
