// Differential test: expected_reward against exhaustive enumeration of
// memoryless policies, each evaluated by an independently written dense
// rational solve. Memoryless policies suffice for reachability rewards, so
// the enumeration is a complete oracle on small models.

#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "pexa/mdp.hpp"

using namespace pexa;
using namespace pexa::test;

namespace {

struct ChainEval {
    std::vector<Rat> value;
    std::vector<bool> infinite;
};

// Expected reward of a fixed policy: infinite where the target is not
// reached almost surely, otherwise the unique solution of x = r + P x with
// the target absorbed at zero. Plain dense elimination, no decomposition.
ChainEval eval_chain(const Mdp& m, const std::vector<size_t>& policy,
                     const std::vector<bool>& target, const RewardStructure& rewards) {
    size_t n = m.num_states;
    // can reach the target at all
    std::vector<bool> reach = target;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t s = 0; s < n; ++s) {
            if (reach[s] || target[s]) continue;
            for (const auto& [t, p] : m.actions[s][policy[s]].transitions)
                if (reach[t]) {
                    reach[s] = true;
                    changed = true;
                }
        }
    }
    // almost-sure: cannot reach a state from which the target is unreachable
    std::vector<bool> inf(n, false);
    for (size_t s = 0; s < n; ++s) inf[s] = !reach[s] && !target[s];
    changed = true;
    while (changed) {
        changed = false;
        for (size_t s = 0; s < n; ++s) {
            if (inf[s] || target[s]) continue;
            for (const auto& [t, p] : m.actions[s][policy[s]].transitions)
                if (inf[t]) {
                    inf[s] = true;
                    changed = true;
                }
        }
    }
    // dense solve over the proper, non-target states
    std::vector<int> col(n, -1);
    std::vector<size_t> vars;
    for (size_t s = 0; s < n; ++s)
        if (!inf[s] && !target[s]) {
            col[s] = static_cast<int>(vars.size());
            vars.push_back(s);
        }
    size_t k = vars.size();
    std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k + 1, Rat(0)));
    for (size_t i = 0; i < k; ++i) {
        size_t s = vars[i];
        a[i][i] = 1;
        a[i][k] = rewards.state_reward[s];
        for (const auto& [t, p] : m.actions[s][policy[s]].transitions) {
            if (target[t]) continue;
            REQUIRE(col[t] >= 0); // proper states cannot step into infinite ones
            a[i][static_cast<size_t>(col[t])] -= p;
        }
    }
    for (size_t c = 0; c < k; ++c) {
        size_t pivot = c;
        while (pivot < k && a[pivot][c] == 0) ++pivot;
        REQUIRE(pivot < k);
        std::swap(a[c], a[pivot]);
        Rat inv = a[c][c];
        for (size_t j = c; j <= k; ++j) a[c][j] /= inv;
        for (size_t r = 0; r < k; ++r) {
            if (r == c || a[r][c] == 0) continue;
            Rat f = a[r][c];
            for (size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    ChainEval ev;
    ev.value.assign(n, Rat(0));
    ev.infinite = inf;
    for (size_t i = 0; i < k; ++i) ev.value[vars[i]] = a[i][k];
    return ev;
}

struct Optimum {
    std::vector<Rat> value;
    std::vector<bool> infinite;
};

Optimum brute_force(const Mdp& m, const std::vector<bool>& target,
                    const RewardStructure& rewards, Query::Mode mode) {
    size_t n = m.num_states;
    Optimum best;
    best.value.assign(n, Rat(0));
    // min starts from "everything infinite", max from "nothing infinite yet"
    best.infinite.assign(n, mode == Query::Mode::Min);
    for (size_t s = 0; s < n; ++s)
        if (target[s]) best.infinite[s] = false;

    std::vector<size_t> policy(n, 0);
    while (true) {
        ChainEval ev = eval_chain(m, policy, target, rewards);
        for (size_t s = 0; s < n; ++s) {
            if (target[s]) continue;
            if (mode == Query::Mode::Min) {
                if (ev.infinite[s]) continue;
                if (best.infinite[s] || ev.value[s] < best.value[s]) {
                    best.infinite[s] = false;
                    best.value[s] = ev.value[s];
                }
            } else {
                if (best.infinite[s]) continue;
                if (ev.infinite[s]) best.infinite[s] = true;
                else if (ev.value[s] > best.value[s]) best.value[s] = ev.value[s];
            }
        }
        size_t i = 0;
        for (; i < n; ++i) {
            if (++policy[i] < m.actions[i].size()) break;
            policy[i] = 0;
        }
        if (i == n) break;
    }
    return best;
}

Mdp random_mdp(std::mt19937_64& rng) {
    auto pick = [&](size_t k) { return std::uniform_int_distribution<size_t>(0, k - 1)(rng); };
    Mdp m;
    m.num_states = static_cast<uint32_t>(3 + pick(3)); // 3..5
    m.actions.resize(m.num_states);
    for (uint32_t s = 0; s < m.num_states; ++s) {
        size_t nactions = 1 + pick(3);
        for (size_t a = 0; a < nactions; ++a) {
            size_t nsucc = 1 + pick(2);
            std::map<uint32_t, long> weights;
            for (size_t i = 0; i < nsucc; ++i)
                weights[static_cast<uint32_t>(pick(m.num_states))] += 1 + static_cast<long>(pick(3));
            long total = 0;
            for (auto& [t, w] : weights) total += w;
            MdpAction action;
            for (auto& [t, w] : weights) action.transitions.emplace_back(t, rat(w, total));
            m.actions[s].push_back(std::move(action));
        }
    }
    m.initial = {0};
    merge_duplicate_actions(m);
    m.validate();
    return m;
}

}  // namespace

TEST_CASE("expected rewards match exhaustive policy enumeration") {
    std::mt19937_64 rng(0xBEEF);
    auto pick = [&](size_t k) { return std::uniform_int_distribution<size_t>(0, k - 1)(rng); };
    const Rat reward_choices[] = {Rat(0), Rat(0), Rat(1), rat(1, 2), Rat(2)};
    size_t infinite_seen = 0;
    size_t zero_reward_cases = 0;
    for (int iter = 0; iter < 120; ++iter) {
        Mdp m = random_mdp(rng);
        std::vector<bool> target(m.num_states, false);
        size_t ntargets = 1 + pick(2);
        for (size_t i = 0; i < ntargets; ++i) target[pick(m.num_states)] = true;
        RewardStructure rewards;
        bool has_zero = false;
        for (uint32_t s = 0; s < m.num_states; ++s) {
            Rat r = target[s] ? Rat(0) : reward_choices[pick(5)];
            if (r == 0 && !target[s]) has_zero = true;
            rewards.state_reward.push_back(r);
        }
        if (has_zero) ++zero_reward_cases;
        for (auto mode : {Query::Mode::Min, Query::Mode::Max}) {
            CAPTURE(iter);
            Optimum expect = brute_force(m, target, rewards, mode);
            QueryResult got = expected_reward(m, target, rewards, mode);
            for (uint32_t s = 0; s < m.num_states; ++s) {
                CAPTURE(s);
                REQUIRE(got.infinite[s] == expect.infinite[s]);
                if (!expect.infinite[s]) REQUIRE(got.values[s] == expect.value[s]);
                if (expect.infinite[s]) ++infinite_seen;
            }
        }
    }
    // the interesting regimes actually occurred
    CHECK(infinite_seen > 50);
    CHECK(zero_reward_cases > 40);
}
