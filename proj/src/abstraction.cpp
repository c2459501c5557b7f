#include "pexa/abstraction.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace pexa {

std::string Partition::cube_str(size_t cube_index, const PredicateSet& phi) const {
    const Cube& c = cubes[cube_index];
    if (phi.size() == 0) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < phi.size(); ++i) {
        if (i) os << " & ";
        if (!c.truth[i]) os << "!(" << phi.texts[i] << ")";
        else os << "(" << phi.texts[i] << ")";
    }
    return os.str();
}

Partition cubes(const PredicateSet& phi, const StateSpace& space) {
    // Group states by truth vector; order all-true first (descending lex).
    std::map<std::vector<bool>, std::vector<uint32_t>, std::greater<>> groups;
    for (size_t s = 0; s < space.count(); ++s) {
        std::vector<bool> tv(phi.size());
        for (size_t i = 0; i < phi.size(); ++i) tv[i] = eval_bexpr(phi.preds[i], space, s);
        groups[tv].push_back(static_cast<uint32_t>(s));
    }
    Partition part;
    part.cube_of_state.assign(space.count(), 0);
    for (auto& [tv, states] : groups) {
        for (uint32_t s : states) part.cube_of_state[s] = static_cast<uint32_t>(part.cubes.size());
        part.cubes.push_back(Cube{tv, std::move(states)});
    }
    return part;
}

Expectation cubed(const Expectation& e, const Partition& part) {
    Expectation out(e.size());
    for (const Cube& c : part.cubes) {
        Rat inf = e[c.states[0]];
        for (uint32_t s : c.states) inf = std::min(inf, e[s]);
        for (uint32_t s : c.states) out[s] = inf;
    }
    return out;
}

bool is_cubed(const Expectation& e, const Partition& part) { return e == cubed(e, part); }

WpResult wp_abs(const ProgramPtr& prog, const Expectation& post, const Partition& part,
                const StateSpace& space, const WpOptions& opts) {
    WpResult res = wp(prog, post, space, opts);
    res.value = cubed(res.value, part);
    return res;
}

namespace {

std::vector<IpDifference> differences(const Expectation& wp_value, const Expectation& cubed_value) {
    std::vector<IpDifference> out;
    for (size_t s = 0; s < wp_value.size(); ++s)
        if (wp_value[s] != cubed_value[s])
            out.push_back({static_cast<uint32_t>(s), wp_value[s], cubed_value[s]});
    return out;
}

}  // namespace

IpReport check_info_preserving(const ProgramPtr& prog, const PredicateSet& phi,
                               const StateSpace& space, const WpOptions& opts) {
    if (has_demonic_choice(prog))
        throw ModelError(
            "information-preservation is defined for deterministic programs; "
            "decompose the demonic choice into components (see check_data_independent)");

    Partition part = cubes(phi, space);
    IpReport report;

    // Fast path: wp(prog, [phi]) cubed for every predicate of the set. For
    // deterministic programs this is equivalent to the cube-level condition,
    // and a failing predicate makes a compact witness.
    for (size_t i = 0; i < phi.size(); ++i) {
        Expectation w = wp(prog, indicator(phi.preds[i], space), space, opts).value;
        Expectation cw = cubed(w, part);
        bool ok = w == cw;
        report.predicate_detail.emplace_back(phi.texts[i], ok);
        if (!ok && !report.witness) {
            report.witness = IpWitness{phi.texts[i], false, {}, differences(w, cw)};
        }
    }
    if (report.witness) {
        report.preserving = false;
        return report;
    }

    // Certifying path: wp on every cube indicator coincides with its cubed
    // form. This is the defining condition and is checked in full.
    for (size_t ci = 0; ci < part.cubes.size(); ++ci) {
        Expectation ind(space.count(), Rat(0));
        for (uint32_t s : part.cubes[ci].states) ind[s] = 1;
        Expectation w = wp(prog, ind, space, opts).value;
        Expectation cw = cubed(w, part);
        if (w != cw) {
            report.preserving = false;
            report.witness =
                IpWitness{part.cube_str(ci, phi), true, part.cubes[ci].truth, differences(w, cw)};
            return report;
        }
    }
    report.preserving = true;
    return report;
}

namespace {

const char* cmp_text(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

// Canonical form of a comparison between two distinct variables, used to drop
// duplicates up to operand symmetry and negation:
//   x = y  ~ y = x        x != y ~ !(x = y)
//   x < y  ~ y > x        x >= y ~ !(x < y)
//   x <= y ~ !(y < x)     x > y  ~ y < x
// Every comparison reduces to Eq over an unordered pair or Lt over an ordered
// pair, possibly negated; the unnegated reduced form is the dedup key.
struct CanonicalCmp {
    bool is_eq;
    std::string a, b;
    auto operator<=>(const CanonicalCmp&) const = default;
};

CanonicalCmp canonical_cmp(CmpOp op, const std::string& x, const std::string& y) {
    switch (op) {
        case CmpOp::Eq:
        case CmpOp::Ne: return {true, std::min(x, y), std::max(x, y)};
        case CmpOp::Lt:
        case CmpOp::Ge: return {false, x, y};
        case CmpOp::Gt:
        case CmpOp::Le: return {false, y, x};
    }
    return {true, x, y};
}

}  // namespace

PredicateSet di_predicates(const std::vector<VarDecl>& decls, const std::set<CmpOp>& relations) {
    PredicateSet psi;
    std::set<CanonicalCmp> seen;
    for (size_t i = 0; i < decls.size(); ++i) {
        for (size_t j = 0; j < decls.size(); ++j) {
            if (i == j) continue; // tautologies x = x, x < x
            for (CmpOp op : relations) {
                CanonicalCmp key = canonical_cmp(op, decls[i].name, decls[j].name);
                if (!seen.insert(key).second) continue;
                std::string text = decls[i].name + " " + cmp_text(op) + " " + decls[j].name;
                psi.add(text, bcmp(op, avar(decls[i].name), avar(decls[j].name)));
            }
        }
    }
    return psi;
}

DiReport check_data_independent(const ProgramPtr& prog, const StateSpace& space,
                                const WpOptions& opts) {
    DiReport report;
    report.psi = di_predicates(space.decls(),
                               {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge});
    report.independent = true;
    for (const ProgramPtr& component : demonic_components(prog)) {
        report.component_texts.push_back(print_program(component));
        report.components.push_back(check_info_preserving(component, report.psi, space, opts));
        if (!report.components.back().preserving) report.independent = false;
    }
    return report;
}

}  // namespace pexa
