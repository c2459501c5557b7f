#include "pexa/mdp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

namespace pexa {

bool Mdp::has_label(const std::string& name, uint32_t state) const {
    auto it = labels.find(name);
    if (it == labels.end()) return false;
    return std::binary_search(it->second.begin(), it->second.end(), state);
}

std::vector<bool> Mdp::label_set(const std::string& name) const {
    std::vector<bool> out(num_states, false);
    auto it = labels.find(name);
    if (it != labels.end())
        for (uint32_t s : it->second) out[s] = true;
    return out;
}

void Mdp::validate() const {
    if (actions.size() != num_states) throw ModelError("mdp: action table size mismatch");
    for (uint32_t s = 0; s < num_states; ++s) {
        if (actions[s].empty())
            throw ModelError("mdp: state " + std::to_string(s) + " has no actions");
        for (const MdpAction& a : actions[s]) {
            Rat sum(0);
            uint32_t prev = 0;
            bool first = true;
            for (const auto& [t, p] : a.transitions) {
                if (t >= num_states) throw ModelError("mdp: successor out of range");
                if (!first && t <= prev) throw ModelError("mdp: transitions not sorted/unique");
                if (p <= 0) throw ModelError("mdp: non-positive transition probability");
                sum += p;
                prev = t;
                first = false;
            }
            if (sum != 1) throw ModelError("mdp: action probabilities sum to " + rat_str(sum));
        }
    }
    for (uint32_t s : initial)
        if (s >= num_states) throw ModelError("mdp: initial state out of range");
    for (const auto& [name, states] : labels)
        for (uint32_t s : states)
            if (s >= num_states) throw ModelError("mdp: label '" + name + "' out of range");
}

void merge_duplicate_actions(Mdp& m) {
    for (auto& acts : m.actions) {
        for (MdpAction& a : acts) {
            std::map<uint32_t, Rat> merged;
            for (const auto& [t, p] : a.transitions) merged[t] += p;
            a.transitions.assign(merged.begin(), merged.end());
            std::erase_if(a.transitions, [](const auto& e) { return e.second == 0; });
        }
        std::sort(acts.begin(), acts.end());
        acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    }
}

bool is_deterministic(const Mdp& m) {
    for (const auto& acts : m.actions)
        if (acts.size() != 1) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Extraction from loop-form models.

namespace {

using Dist = std::map<uint32_t, Rat>;

struct ExtractCtx {
    const StateSpace& space;
    const MdpOptions& opts;
    uint32_t sink; // == num_states when absent
    std::map<std::pair<const Program*, uint32_t>, std::vector<Dist>> memo;
};

void check_cap(size_t count, const ExtractCtx& ctx) {
    if (count > ctx.opts.max_actions_per_state)
        throw ModelError("demonic branching exceeds the cap of " +
                         std::to_string(ctx.opts.max_actions_per_state) + " actions per state");
}

std::vector<Dist> dedupe(std::vector<Dist> dists) {
    std::sort(dists.begin(), dists.end());
    dists.erase(std::unique(dists.begin(), dists.end()), dists.end());
    return dists;
}

std::vector<Dist> enum_dists(uint32_t state, const ProgramPtr& prog, ExtractCtx& ctx);

std::vector<Dist> enum_dists_at(uint32_t state, const ProgramPtr& prog, ExtractCtx& ctx) {
    if (state == ctx.sink) return {Dist{{ctx.sink, Rat(1)}}};
    return enum_dists(state, prog, ctx);
}

std::vector<Dist> enum_dists(uint32_t state, const ProgramPtr& prog, ExtractCtx& ctx) {
    auto key = std::make_pair(prog.get(), state);
    if (auto it = ctx.memo.find(key); it != ctx.memo.end()) return it->second;
    std::vector<Dist> out;
    switch (prog->kind) {
        case Program::Kind::Skip: out = {Dist{{state, Rat(1)}}}; break;
        case Program::Kind::Abort: out = {Dist{{ctx.sink, Rat(1)}}}; break;
        case Program::Kind::Assign: {
            size_t var = ctx.space.var_index(prog->var);
            long v = ctx.space.normalize(var, eval_aexpr(prog->expr, ctx.space, state));
            out = {Dist{{static_cast<uint32_t>(ctx.space.with_value(state, var, v)), Rat(1)}}};
            break;
        }
        case Program::Kind::If:
            out = enum_dists(state, eval_bexpr(prog->guard, ctx.space, state) ? prog->left
                                                                              : prog->right,
                             ctx);
            break;
        case Program::Kind::DemonicChoice: {
            out = enum_dists(state, prog->left, ctx);
            auto r = enum_dists(state, prog->right, ctx);
            out.insert(out.end(), r.begin(), r.end());
            out = dedupe(std::move(out));
            check_cap(out.size(), ctx);
            break;
        }
        case Program::Kind::ProbChoice: {
            if (prog->prob == 1) {
                out = enum_dists(state, prog->left, ctx);
                break;
            }
            if (prog->prob == 0) {
                out = enum_dists(state, prog->right, ctx);
                break;
            }
            auto ls = enum_dists(state, prog->left, ctx);
            auto rs = enum_dists(state, prog->right, ctx);
            check_cap(ls.size() * rs.size(), ctx);
            Rat q = Rat(1) - prog->prob;
            for (const Dist& l : ls) {
                for (const Dist& r : rs) {
                    Dist d;
                    for (const auto& [t, p] : l) d[t] += prog->prob * p;
                    for (const auto& [t, p] : r) d[t] += q * p;
                    out.push_back(std::move(d));
                }
            }
            out = dedupe(std::move(out));
            break;
        }
        case Program::Kind::Seq: {
            // The demon may choose per intermediate state: for each left
            // distribution, take the cartesian product of right distributions
            // over its support.
            for (const Dist& l : enum_dists(state, prog->left, ctx)) {
                std::vector<std::pair<Rat, const std::vector<Dist>*>> parts;
                size_t combos = 1;
                std::vector<std::vector<Dist>> storage;
                storage.reserve(l.size());
                for (const auto& [t, p] : l) {
                    storage.push_back(enum_dists_at(t, prog->right, ctx));
                    combos *= storage.back().size();
                    check_cap(combos, ctx);
                    parts.push_back({p, &storage.back()});
                }
                std::vector<size_t> pick(parts.size(), 0);
                while (true) {
                    Dist d;
                    for (size_t i = 0; i < parts.size(); ++i)
                        for (const auto& [t, p] : (*parts[i].second)[pick[i]])
                            d[t] += parts[i].first * p;
                    out.push_back(std::move(d));
                    size_t i = 0;
                    for (; i < parts.size(); ++i) {
                        if (++pick[i] < parts[i].second->size()) break;
                        pick[i] = 0;
                    }
                    if (i == parts.size()) break;
                }
            }
            out = dedupe(std::move(out));
            check_cap(out.size(), ctx);
            break;
        }
        case Program::Kind::Loop: throw ModelError("nested loops are not supported");
    }
    ctx.memo[key] = out;
    return out;
}

}  // namespace

Mdp extract_mdp(const Model& model, const StateSpace& space, const MdpOptions& opts) {
    if (!model.program || model.program->kind != Program::Kind::Loop)
        throw ModelError("model is not loop-form (expected a single 'do G -> body od')");
    const ProgramPtr& body = model.program->left;
    if (has_loop(body)) throw ModelError("nested loops are not supported");

    bool need_sink = has_abort(body);
    Mdp m;
    m.num_states = static_cast<uint32_t>(space.count()) + (need_sink ? 1 : 0);
    m.actions.resize(m.num_states);
    ExtractCtx ctx{space, opts, static_cast<uint32_t>(space.count()), {}};

    std::vector<uint32_t> exit_states;
    for (uint32_t s = 0; s < space.count(); ++s) {
        m.initial.push_back(s);
        if (!eval_bexpr(model.program->guard, space, s)) {
            m.actions[s].push_back(MdpAction{{{s, Rat(1)}}});
            exit_states.push_back(s);
            continue;
        }
        for (const Dist& d : enum_dists(s, body, ctx))
            m.actions[s].push_back(MdpAction{{d.begin(), d.end()}});
    }
    if (need_sink) {
        m.actions[ctx.sink].push_back(MdpAction{{{ctx.sink, Rat(1)}}});
        m.labels["sink"] = {ctx.sink};
    }
    m.labels["exit"] = exit_states;
    merge_duplicate_actions(m);
    m.validate();
    return m;
}

Mdp quotient_mdp(const Mdp& m, const std::vector<uint32_t>& block_of_state, uint32_t num_blocks) {
    if (block_of_state.size() != m.num_states)
        throw ModelError("quotient: partition size mismatch");
    Mdp q;
    q.num_states = num_blocks;
    q.actions.resize(num_blocks);
    std::vector<std::set<MdpAction>> seen(num_blocks);
    for (uint32_t s = 0; s < m.num_states; ++s) {
        uint32_t b = block_of_state[s];
        if (b >= num_blocks) throw ModelError("quotient: block index out of range");
        for (const MdpAction& a : m.actions[s]) {
            Dist lifted;
            for (const auto& [t, p] : a.transitions) lifted[block_of_state[t]] += p;
            MdpAction la{{lifted.begin(), lifted.end()}};
            if (seen[b].insert(la).second) q.actions[b].push_back(std::move(la));
        }
    }
    std::set<uint32_t> init;
    for (uint32_t s : m.initial) init.insert(block_of_state[s]);
    q.initial.assign(init.begin(), init.end());
    // A label survives only if it covers entire blocks.
    std::vector<uint32_t> block_size(num_blocks, 0);
    for (uint32_t b : block_of_state) ++block_size[b];
    for (const auto& [name, states] : m.labels) {
        std::vector<uint32_t> cover(num_blocks, 0);
        for (uint32_t s : states) ++cover[block_of_state[s]];
        std::vector<uint32_t> blocks;
        bool partial = false;
        for (uint32_t b = 0; b < num_blocks; ++b) {
            if (cover[b] == 0) continue;
            if (cover[b] == block_size[b]) blocks.push_back(b);
            else partial = true;
        }
        if (!partial && !blocks.empty()) q.labels[name] = std::move(blocks);
    }
    q.validate();
    return q;
}

QueryResult pbounded(const Mdp& m, const std::vector<bool>& target, size_t horizon,
                     Query::Mode mode) {
    assert(target.size() == m.num_states);
    std::vector<Rat> v(m.num_states, Rat(0));
    for (uint32_t s = 0; s < m.num_states; ++s)
        if (target[s]) v[s] = 1;
    for (size_t step = 0; step < horizon; ++step) {
        std::vector<Rat> next(m.num_states);
        for (uint32_t s = 0; s < m.num_states; ++s) {
            if (target[s]) {
                next[s] = 1;
                continue;
            }
            bool first = true;
            Rat best(0);
            for (const MdpAction& a : m.actions[s]) {
                Rat val(0);
                for (const auto& [t, p] : a.transitions) val += p * v[t];
                if (first || (mode == Query::Mode::Min ? val < best : val > best)) best = val;
                first = false;
            }
            next[s] = best;
        }
        v = std::move(next);
    }
    QueryResult res;
    res.values = std::move(v);
    res.exact = true;
    res.iterations = horizon;
    return res;
}

RewardStructure unit_rewards(const Mdp& m, const std::vector<bool>& target) {
    RewardStructure r;
    r.state_reward.assign(m.num_states, Rat(1));
    for (uint32_t s = 0; s < m.num_states; ++s)
        if (target[s]) r.state_reward[s] = 0;
    return r;
}

// ---------------------------------------------------------------------------
// Qualitative reachability.

namespace {

// States that can reach `target` with positive probability along paths whose
// intermediate states avoid `avoid` (target states always qualify).
std::vector<bool> reach_avoiding(const Mdp& m, const std::vector<bool>& target,
                                 const std::vector<bool>* avoid) {
    std::vector<std::vector<uint32_t>> preds(m.num_states);
    for (uint32_t s = 0; s < m.num_states; ++s)
        for (const MdpAction& a : m.actions[s])
            for (const auto& [t, p] : a.transitions) preds[t].push_back(s);
    std::vector<bool> out(m.num_states, false);
    std::vector<uint32_t> queue;
    for (uint32_t s = 0; s < m.num_states; ++s)
        if (target[s]) {
            out[s] = true;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        uint32_t t = queue.back();
        queue.pop_back();
        for (uint32_t s : preds[t]) {
            if (out[s] || (avoid && (*avoid)[s])) continue;
            out[s] = true;
            queue.push_back(s);
        }
    }
    return out;
}

}  // namespace

std::vector<bool> reach_exists(const Mdp& m, const std::vector<bool>& target) {
    return reach_avoiding(m, target, nullptr);
}

std::vector<bool> almost_sure_exists(const Mdp& m, const std::vector<bool>& target) {
    // Greatest fixpoint over u of a least fixpoint over v: keep an action that
    // stays inside u and makes progress into v.
    std::vector<bool> u(m.num_states, true);
    while (true) {
        std::vector<bool> v = target;
        bool changed = true;
        while (changed) {
            changed = false;
            for (uint32_t s = 0; s < m.num_states; ++s) {
                if (v[s] || !u[s]) continue;
                for (const MdpAction& a : m.actions[s]) {
                    bool inside = true, progress = false;
                    for (const auto& [t, p] : a.transitions) {
                        if (!u[t]) inside = false;
                        if (v[t]) progress = true;
                    }
                    if (inside && progress) {
                        v[s] = true;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if (v == u) return u;
        u = std::move(v);
    }
}

std::vector<bool> almost_sure_all(const Mdp& m, const std::vector<bool>& target) {
    // Largest closed sub-MDP avoiding the target: from inside, some adversary
    // avoids the target forever.
    std::vector<bool> t0(m.num_states);
    for (uint32_t s = 0; s < m.num_states; ++s) t0[s] = !target[s];
    bool changed = true;
    while (changed) {
        changed = false;
        for (uint32_t s = 0; s < m.num_states; ++s) {
            if (!t0[s]) continue;
            bool has_staying = false;
            for (const MdpAction& a : m.actions[s]) {
                bool staying = true;
                for (const auto& [t, p] : a.transitions)
                    if (!t0[t]) {
                        staying = false;
                        break;
                    }
                if (staying) {
                    has_staying = true;
                    break;
                }
            }
            if (!has_staying) {
                t0[s] = false;
                changed = true;
            }
        }
    }
    // Bad: can steer into the avoiding region without first hitting target.
    std::vector<bool> bad = reach_avoiding(m, t0, &target);
    std::vector<bool> out(m.num_states);
    for (uint32_t s = 0; s < m.num_states; ++s) out[s] = !bad[s];
    return out;
}

// ---------------------------------------------------------------------------
// Expected reward: infinity detection, zero-reward end-component collapse,
// floating warm start, exact policy iteration.

namespace {

struct SolverAction {
    Rat reward;
    std::vector<std::pair<int, Rat>> succs; // solver-node successors
    // Probability mass going straight to the target (value 0).
};

struct SolverModel {
    std::vector<std::vector<SolverAction>> nodes;
};

// Iterative Tarjan SCC over an explicit successor list.
std::vector<int> scc_ids(const std::vector<std::vector<int>>& succ, int& count) {
    int n = static_cast<int>(succ.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    count = 0;
    struct Frame {
        int v;
        size_t child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < succ[f.v].size()) {
                int w = succ[f.v][f.child++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = count;
                        if (w == f.v) break;
                    }
                    ++count;
                }
                int v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return comp;
}

// Maximal end components of the sub-MDP restricted to `allowed`.
// Returns a component id per state (-1 for none).
std::vector<int> max_end_components(const Mdp& m, const std::vector<bool>& allowed, int& count) {
    std::vector<bool> active = allowed;
    std::vector<int> comp(m.num_states, -1);
    count = 0;
    // Refine candidate sets until every member keeps an action inside its
    // own candidate.
    std::vector<std::vector<uint32_t>> work;
    {
        std::vector<uint32_t> all;
        for (uint32_t s = 0; s < m.num_states; ++s)
            if (active[s]) all.push_back(s);
        if (all.empty()) return comp;
        work.push_back(std::move(all));
    }
    std::vector<std::vector<uint32_t>> final_comps;
    while (!work.empty()) {
        std::vector<uint32_t> cand = std::move(work.back());
        work.pop_back();
        std::vector<bool> in_cand(m.num_states, false);
        for (uint32_t s : cand) in_cand[s] = true;
        // Drop states with no action staying fully inside the candidate.
        bool dropped = false;
        std::vector<uint32_t> kept;
        for (uint32_t s : cand) {
            bool stays = false;
            for (const MdpAction& a : m.actions[s]) {
                bool inside = true;
                for (const auto& [t, p] : a.transitions)
                    if (!in_cand[t]) {
                        inside = false;
                        break;
                    }
                if (inside) {
                    stays = true;
                    break;
                }
            }
            if (stays) kept.push_back(s);
            else dropped = true;
        }
        if (kept.empty()) continue;
        // SCC-split the kept states using only inside-staying actions.
        std::vector<bool> in_kept(m.num_states, false);
        for (uint32_t s : kept) in_kept[s] = true;
        std::vector<int> local(m.num_states, -1);
        for (size_t i = 0; i < kept.size(); ++i) local[kept[i]] = static_cast<int>(i);
        std::vector<std::vector<int>> succ(kept.size());
        for (uint32_t s : kept) {
            for (const MdpAction& a : m.actions[s]) {
                bool inside = true;
                for (const auto& [t, p] : a.transitions)
                    if (!in_kept[t]) {
                        inside = false;
                        break;
                    }
                if (!inside) continue;
                for (const auto& [t, p] : a.transitions) succ[local[s]].push_back(local[t]);
            }
        }
        int nscc = 0;
        std::vector<int> ids = scc_ids(succ, nscc);
        if (!dropped && nscc == 1) {
            final_comps.push_back(std::move(kept));
            continue;
        }
        std::vector<std::vector<uint32_t>> parts(nscc);
        for (size_t i = 0; i < kept.size(); ++i) parts[ids[i]].push_back(kept[i]);
        for (auto& part : parts)
            if (!part.empty()) work.push_back(std::move(part));
    }
    for (const auto& mec : final_comps) {
        for (uint32_t s : mec) comp[s] = count;
        ++count;
    }
    return comp;
}

constexpr double kViResidual = 1e-9;
constexpr size_t kViMaxIterations = 2'000'000;

struct PolicyEvaluation {
    std::vector<Rat> value;
    std::vector<bool> infinite;
};

// Exact evaluation of a fixed policy on the solver model: SCC condensation,
// then a dense rational solve per component in reverse topological order.
PolicyEvaluation evaluate_policy(const SolverModel& model, const std::vector<size_t>& policy) {
    size_t n = model.nodes.size();
    PolicyEvaluation ev;
    ev.value.assign(n, Rat(0));
    ev.infinite.assign(n, false);

    // Nodes from which the target is unreachable under the policy are
    // infinite, as is anything that can reach such a node.
    std::vector<std::vector<int>> succ(n), pred(n);
    std::vector<bool> direct(n, false);
    for (size_t i = 0; i < n; ++i) {
        const SolverAction& a = model.nodes[i][policy[i]];
        Rat mass(0);
        for (const auto& [j, p] : a.succs) {
            succ[i].push_back(j);
            pred[j].push_back(static_cast<int>(i));
            mass += p;
        }
        direct[i] = mass < 1; // some probability exits straight to target
    }
    std::vector<bool> reaches(n, false);
    {
        std::vector<int> queue;
        for (size_t i = 0; i < n; ++i)
            if (direct[i]) {
                reaches[i] = true;
                queue.push_back(static_cast<int>(i));
            }
        while (!queue.empty()) {
            int t = queue.back();
            queue.pop_back();
            for (int s : pred[t])
                if (!reaches[s]) {
                    reaches[s] = true;
                    queue.push_back(s);
                }
        }
    }
    // Improper: can reach a node from which the target is unreachable.
    std::vector<bool> dead(n, false);
    {
        std::vector<int> queue;
        for (size_t i = 0; i < n; ++i)
            if (!reaches[i]) {
                dead[i] = true;
                queue.push_back(static_cast<int>(i));
            }
        while (!queue.empty()) {
            int t = queue.back();
            queue.pop_back();
            for (int s : pred[t])
                if (!dead[s]) {
                    dead[s] = true;
                    queue.push_back(s);
                }
        }
    }
    for (size_t i = 0; i < n; ++i) ev.infinite[i] = dead[i];

    // Solve x = r + P x on the proper part, one SCC at a time.
    std::vector<int> solve_nodes;
    std::vector<int> local(n, -1);
    for (size_t i = 0; i < n; ++i)
        if (!dead[i]) {
            local[i] = static_cast<int>(solve_nodes.size());
            solve_nodes.push_back(static_cast<int>(i));
        }
    std::vector<std::vector<int>> lsucc(solve_nodes.size());
    for (size_t li = 0; li < solve_nodes.size(); ++li)
        for (int j : succ[solve_nodes[li]])
            if (local[j] >= 0) lsucc[li].push_back(local[j]);
    int nscc = 0;
    std::vector<int> comp = scc_ids(lsucc, nscc);
    std::vector<std::vector<int>> members(nscc);
    for (size_t li = 0; li < solve_nodes.size(); ++li) members[comp[li]].push_back(static_cast<int>(li));
    // Tarjan numbers components in reverse topological order: every edge goes
    // from a higher id to a lower or equal id, so successors are solved first.
    std::vector<bool> solved(solve_nodes.size(), false);
    for (int c = 0; c < nscc; ++c) {
        const std::vector<int>& mem = members[c];
        size_t k = mem.size();
        std::vector<int> pos(solve_nodes.size(), -1);
        for (size_t i = 0; i < k; ++i) pos[mem[i]] = static_cast<int>(i);
        // Dense system A x = b with A = I - P restricted to the component.
        std::vector<std::vector<Rat>> a(k, std::vector<Rat>(k, Rat(0)));
        std::vector<Rat> b(k, Rat(0));
        for (size_t i = 0; i < k; ++i) {
            int node = solve_nodes[mem[i]];
            const SolverAction& act = model.nodes[node][policy[node]];
            a[i][i] = 1;
            b[i] = act.reward;
            for (const auto& [j, p] : act.succs) {
                int lj = local[j];
                assert(lj >= 0);
                if (pos[lj] >= 0) {
                    a[i][pos[lj]] -= p;
                } else {
                    assert(solved[lj]);
                    b[i] += p * ev.value[j];
                }
            }
        }
        // Gaussian elimination with exact pivoting on nonzero entries.
        for (size_t col = 0; col < k; ++col) {
            size_t pivot = col;
            while (pivot < k && a[pivot][col] == 0) ++pivot;
            if (pivot == k) throw ModelError("singular policy evaluation system");
            std::swap(a[col], a[pivot]);
            std::swap(b[col], b[pivot]);
            Rat inv = a[col][col];
            for (size_t j = col; j < k; ++j) a[col][j] /= inv;
            b[col] /= inv;
            for (size_t row = 0; row < k; ++row) {
                if (row == col || a[row][col] == 0) continue;
                Rat f = a[row][col];
                for (size_t j = col; j < k; ++j) a[row][j] -= f * a[col][j];
                b[row] -= f * b[col];
            }
        }
        for (size_t i = 0; i < k; ++i) {
            ev.value[solve_nodes[mem[i]]] = b[i];
            solved[mem[i]] = true;
        }
    }
    return ev;
}

}  // namespace

QueryResult expected_reward(const Mdp& m, const std::vector<bool>& target,
                            const RewardStructure& rewards, Query::Mode mode) {
    assert(target.size() == m.num_states);
    if (rewards.state_reward.size() != m.num_states)
        throw ModelError("reward structure size mismatch");
    for (const Rat& r : rewards.state_reward)
        if (r < 0) throw ModelError("negative reward");
    bool any_target = false;
    for (uint32_t s = 0; s < m.num_states; ++s) any_target |= target[s];
    if (!any_target) throw ModelError("expected reward requires a non-empty target");

    bool minimize = mode == Query::Mode::Min;
    std::vector<bool> finite =
        minimize ? almost_sure_exists(m, target) : almost_sure_all(m, target);

    QueryResult res;
    res.values.assign(m.num_states, Rat(0));
    res.infinite.assign(m.num_states, false);
    for (uint32_t s = 0; s < m.num_states; ++s)
        if (!target[s] && !finite[s]) res.infinite[s] = true;

    // Zero-reward end components let a minimizing adversary idle for free;
    // collapse them so that value iteration cannot stall below the answer.
    std::vector<int> mec_of(m.num_states, -1);
    int mec_count = 0;
    if (minimize) {
        std::vector<bool> zero_zone(m.num_states, false);
        for (uint32_t s = 0; s < m.num_states; ++s)
            zero_zone[s] = finite[s] && !target[s] && rewards.state_reward[s] == 0;
        mec_of = max_end_components(m, zero_zone, mec_count);
    }

    // Solver nodes: one per collapsed component, one per remaining finite
    // non-target state.
    std::vector<int> node_of(m.num_states, -1);
    int next_node = mec_count;
    for (uint32_t s = 0; s < m.num_states; ++s) {
        if (target[s] || !finite[s]) continue;
        node_of[s] = mec_of[s] >= 0 ? mec_of[s] : next_node++;
    }
    SolverModel model;
    model.nodes.resize(next_node);
    for (uint32_t s = 0; s < m.num_states; ++s) {
        if (node_of[s] < 0) continue;
        for (const MdpAction& a : m.actions[s]) {
            SolverAction sa;
            sa.reward = rewards.state_reward[s];
            bool usable = true;
            bool internal = mec_of[s] >= 0;
            std::map<int, Rat> grouped;
            for (const auto& [t, p] : a.transitions) {
                if (target[t]) {
                    internal = false;
                    continue; // mass to target contributes value 0
                }
                if (!finite[t]) {
                    usable = false; // infinite successor: never optimal for min
                    break;
                }
                if (node_of[t] != node_of[s]) internal = false;
                grouped[node_of[t]] += p;
            }
            if (!usable) {
                assert(minimize);
                continue;
            }
            if (internal) continue; // free movement inside a collapsed component
            sa.succs.assign(grouped.begin(), grouped.end());
            model.nodes[node_of[s]].push_back(std::move(sa));
        }
    }
    for (const auto& node : model.nodes)
        if (node.empty()) throw ModelError("internal: solver node without actions");

    size_t n = model.nodes.size();
    if (n == 0) {
        res.exact = true;
        return res;
    }

    // Floating-point value iteration for a warm-start policy.
    std::vector<double> x(n, 0.0);
    double residual = 0.0;
    size_t iter = 0;
    for (; iter < kViMaxIterations; ++iter) {
        residual = 0.0;
        for (size_t i = 0; i < n; ++i) {
            bool first = true;
            double best = 0.0;
            for (const SolverAction& a : model.nodes[i]) {
                double v = rat_double(a.reward);
                for (const auto& [j, p] : a.succs) v += rat_double(p) * x[j];
                if (first || (minimize ? v < best : v > best)) best = v;
                first = false;
            }
            residual = std::max(residual, std::abs(best - x[i]));
            x[i] = best;
        }
        if (residual <= kViResidual) break;
    }
    std::vector<size_t> policy(n, 0);
    for (size_t i = 0; i < n; ++i) {
        bool first = true;
        double best = 0.0;
        for (size_t ai = 0; ai < model.nodes[i].size(); ++ai) {
            const SolverAction& a = model.nodes[i][ai];
            double v = rat_double(a.reward);
            for (const auto& [j, p] : a.succs) v += rat_double(p) * x[j];
            if (first || (minimize ? v < best : v > best)) {
                best = v;
                policy[i] = ai;
            }
            first = false;
        }
    }

    // Exact policy iteration: evaluate, then switch on strict improvement.
    PolicyEvaluation ev = evaluate_policy(model, policy);
    const size_t kMaxPiRounds = 10'000;
    size_t rounds = 0;
    while (true) {
        if (++rounds > kMaxPiRounds) throw ModelError("policy iteration failed to converge");
        bool improved = false;
        for (size_t i = 0; i < n; ++i) {
            for (size_t ai = 0; ai < model.nodes[i].size(); ++ai) {
                if (ai == policy[i]) continue;
                const SolverAction& a = model.nodes[i][ai];
                bool inf = false;
                Rat v = a.reward;
                for (const auto& [j, p] : a.succs) {
                    if (ev.infinite[j]) {
                        inf = true;
                        break;
                    }
                    v += p * ev.value[j];
                }
                bool better;
                if (ev.infinite[i]) better = !inf;
                else if (inf) better = false;
                else better = minimize ? v < ev.value[i] : v > ev.value[i];
                if (better) {
                    policy[i] = ai;
                    improved = true;
                }
            }
        }
        if (!improved) break;
        ev = evaluate_policy(model, policy);
    }
    for (size_t i = 0; i < n; ++i) {
        if (ev.infinite[i]) throw ModelError("internal: optimal policy evaluated infinite");
    }

    for (uint32_t s = 0; s < m.num_states; ++s)
        if (node_of[s] >= 0) res.values[s] = ev.value[node_of[s]];
    res.exact = true;
    res.iterations = iter;
    res.residual = residual;
    return res;
}

}  // namespace pexa
