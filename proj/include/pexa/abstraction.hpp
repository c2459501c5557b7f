#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pexa/wp.hpp"

namespace pexa {

struct PredicateSet {
    std::vector<std::string> texts;
    std::vector<BExprPtr> preds;

    size_t size() const { return preds.size(); }
    void add(std::string text, BExprPtr pred) {
        texts.push_back(std::move(text));
        preds.push_back(std::move(pred));
    }
};

struct Cube {
    std::vector<bool> truth;      // satisfaction of each predicate, in set order
    std::vector<uint32_t> states; // sorted member state indices
};

// The partition of the state space induced by a predicate set: states sharing
// the truth vector over all predicates form one cube. Empty combinations are
// omitted; cubes are ordered lexicographically by truth vector, all-true first.
struct Partition {
    std::vector<Cube> cubes;
    std::vector<uint32_t> cube_of_state;

    std::string cube_str(size_t cube_index, const PredicateSet& phi) const;
};

Partition cubes(const PredicateSet& phi, const StateSpace& space);

// The greatest expectation below `e` that is constant on every cube: on each
// cube, the infimum of `e` over its members.
Expectation cubed(const Expectation& e, const Partition& part);

// Exact test for e == cubed(e); no tolerance.
bool is_cubed(const Expectation& e, const Partition& part);

// Abstract weakest pre-expectation: cubed after wp. Always below wp.
WpResult wp_abs(const ProgramPtr& prog, const Expectation& post, const Partition& part,
                const StateSpace& space, const WpOptions& opts = {});

struct IpDifference {
    uint32_t state;
    Rat wp_value;
    Rat cubed_value;
};

struct IpWitness {
    // The expectation whose wp fails to be cubed: a predicate of the set
    // (fast path) or a single cube indicator (certifying path).
    std::string text;
    bool is_cube = false;
    std::vector<bool> cube_truth;
    std::vector<IpDifference> differing;
};

struct IpReport {
    bool preserving = false;
    std::optional<IpWitness> witness;
    // Per-predicate fast-path detail: is wp(prog, [phi]) cubed?
    std::vector<std::pair<std::string, bool>> predicate_detail;
};

// Decides whether the abstraction induced by `phi` preserves wp exactly on
// every cube indicator. Requires a demonic-choice-free program (decompose
// nondeterministic programs with check_data_independent or by component);
// throws ModelError otherwise.
IpReport check_info_preserving(const ProgramPtr& prog, const PredicateSet& phi,
                               const StateSpace& space, const WpOptions& opts = {});

// All pairwise comparisons x THETA y over the declared variables for the
// chosen operators, with tautologies and duplicates up to negation and
// operand symmetry removed.
PredicateSet di_predicates(const std::vector<VarDecl>& decls, const std::set<CmpOp>& relations);

struct DiReport {
    bool independent = false;
    PredicateSet psi;
    // One report per deterministic component of the top-level demonic choice.
    std::vector<IpReport> components;
    std::vector<std::string> component_texts;
};

// A program is data independent when each deterministic component of its
// top-level demonic choice is information-preserving w.r.t. the set of all
// pairwise variable comparisons.
DiReport check_data_independent(const ProgramPtr& prog, const StateSpace& space,
                                const WpOptions& opts = {});

}  // namespace pexa
