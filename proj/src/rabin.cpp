#include "pexa/rabin.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace pexa::rabin {

long conjugate(long n) { return n % 2 == 0 ? n + 1 : n - 1; }

namespace {

int8_t clamp_low(long v) { return static_cast<int8_t>(v < -1 ? -1 : v); }

void add_one(std::vector<long>& bag, long v) {
    bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
}

void remove_one(std::vector<long>& bag, long v) {
    auto it = std::find(bag.begin(), bag.end(), v);
    assert(it != bag.end());
    bag.erase(it);
}

}  // namespace

void ConcreteState::canonicalize() {
    std::sort(lout.begin(), lout.end());
    std::sort(rout.begin(), rout.end());
    std::sort(lin.begin(), lin.end());
    std::sort(rin.begin(), rin.end());
}

ConcreteState initial_state(unsigned a, unsigned b) {
    ConcreteState s;
    s.lout.assign(a, 0);
    s.rout.assign(b, 0);
    return s;
}

std::vector<std::pair<Rat, ConcreteState>> serve(const ConcreteState& s, bool left, long pad) {
    ConcreteState base = s;
    std::vector<long>& queue = left ? base.lout : base.rout;
    std::vector<long>& decided_here = left ? base.lin : base.rin;
    std::vector<long>& queue_other = left ? base.rout : base.lout;
    long board = left ? base.board_left : base.board_right;
    remove_one(queue, pad);

    // Tourists follow a decided crowd blindly; otherwise compare pad and board.
    if (!decided_here.empty() || pad > board) {
        add_one(decided_here, pad);
        return {{Rat(1), std::move(base)}};
    }
    if (pad < board) {
        add_one(queue_other, board); // pad rewritten to the board value
        return {{Rat(1), std::move(base)}};
    }
    // pad == board: bump the board to the next pair, then flip a fair coin for
    // the extra one; the tourist copies the new value and crosses over.
    std::vector<std::pair<Rat, ConcreteState>> out;
    for (long next_board : {board + 2, conjugate(board + 2)}) {
        ConcreteState nxt = base;
        (left ? nxt.board_left : nxt.board_right) = next_board;
        add_one(left ? nxt.rout : nxt.lout, next_board);
        out.push_back({rat(1, 2), std::move(nxt)});
    }
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::pair<bool, long>> service_options(const ConcreteState& s) {
    std::vector<std::pair<bool, long>> opts;
    long prev = -1;
    for (long v : s.lout)
        if (v != prev) {
            opts.emplace_back(true, v);
            prev = v;
        }
    prev = -1;
    for (long v : s.rout)
        if (v != prev) {
            opts.emplace_back(false, v);
            prev = v;
        }
    return opts;
}

}  // namespace

Trace simulate(unsigned a, unsigned b, SchedulerPolicy policy, uint64_t seed, size_t max_steps) {
    std::mt19937_64 rng(seed);
    ConcreteState s = initial_state(a, b);
    size_t expected = s.tourists();
    Trace tr;
    auto record = [&](const ConcreteState& st) {
        tr.states.push_back(st);
        tr.max_board_diff = std::max(tr.max_board_diff, std::labs(st.board_left - st.board_right));
        tr.max_level_diff =
            std::max(tr.max_level_diff, std::labs(st.board_left / 2 - st.board_right / 2));
        if (st.tourists() != expected) tr.tourist_conservation = false;
    };
    record(s);
    bool next_left = true; // round-robin pointer
    while (tr.steps < max_steps && !s.terminated()) {
        auto opts = service_options(s);
        std::pair<bool, long> choice = opts.front();
        switch (policy) {
            case SchedulerPolicy::UniformRandom:
                choice = opts[std::uniform_int_distribution<size_t>(0, opts.size() - 1)(rng)];
                break;
            case SchedulerPolicy::RoundRobin: {
                bool side = next_left;
                if ((side && s.lout.empty()) || (!side && s.rout.empty())) side = !side;
                for (const auto& o : opts)
                    if (o.first == side) {
                        choice = o;
                        break;
                    }
                next_left = !side;
                break;
            }
            case SchedulerPolicy::AdversarialHeuristic: {
                // Prefer forcing a coin flip (pad equal to board), then
                // recycling a stale pad; entering is the last resort.
                auto score = [&](const std::pair<bool, long>& o) {
                    long board = o.first ? s.board_left : s.board_right;
                    bool in_nonempty = o.first ? !s.lin.empty() : !s.rin.empty();
                    if (!in_nonempty && o.second == board) return 0;
                    if (!in_nonempty && o.second < board) return 1;
                    return 2;
                };
                int best = 3;
                for (const auto& o : opts) {
                    int sc = score(o);
                    if (sc < best) {
                        best = sc;
                        choice = o;
                    }
                }
                break;
            }
        }
        auto outcomes = serve(s, choice.first, choice.second);
        if (outcomes.size() == 1) {
            s = std::move(outcomes[0].second);
        } else {
            s = std::move(outcomes[rng() & 1].second);
        }
        ++tr.steps;
        record(s);
    }
    tr.terminated = s.terminated();
    tr.consensus = tr.terminated && (s.lin.size() == expected || s.rin.size() == expected);
    return tr;
}

// ---------------------------------------------------------------------------
// Truncated explicit model.

TruncatedModel truncated_mdp(unsigned a, unsigned b, long board_cap,
                             const TruncatedOptions& opts) {
    if (board_cap < 2) throw ModelError("board cap must be at least 2");
    TruncatedModel model;
    std::map<ConcreteState, uint32_t> index;
    const uint32_t kSinkPlaceholder = UINT32_MAX;

    ConcreteState init = initial_state(a, b);
    index[init] = 0;
    model.states.push_back(init);
    model.depth.push_back(0);
    std::vector<std::vector<MdpAction>> actions;
    size_t head = 0;
    const size_t tourists = init.tourists();
    while (head < model.states.size()) {
        ConcreteState s = model.states[head];
        uint32_t depth = model.depth[head];
        ++head;
        std::vector<MdpAction> acts;
        if (s.terminated() || depth >= opts.max_depth) {
            acts.push_back(MdpAction{{{static_cast<uint32_t>(head - 1), Rat(1)}}});
            actions.push_back(std::move(acts));
            continue;
        }
        for (const auto& [left, pad] : service_options(s)) {
            MdpAction action;
            for (auto& [p, nxt] : serve(s, left, pad)) {
                assert(nxt.tourists() == tourists);
                uint32_t target;
                if (nxt.board_left > board_cap || nxt.board_right > board_cap) {
                    target = kSinkPlaceholder;
                    model.sink_reachable = true;
                } else {
                    auto [it, inserted] = index.emplace(nxt, static_cast<uint32_t>(model.states.size()));
                    if (inserted) {
                        if (model.states.size() >= opts.max_states)
                            throw ModelError("truncated model exceeds state limit");
                        model.states.push_back(nxt);
                        model.depth.push_back(depth + 1);
                    }
                    target = it->second;
                }
                bool merged = false;
                for (auto& [t, q] : action.transitions)
                    if (t == target) {
                        q += p;
                        merged = true;
                    }
                if (!merged) action.transitions.emplace_back(target, p);
            }
            std::sort(action.transitions.begin(), action.transitions.end());
            acts.push_back(std::move(action));
        }
        actions.push_back(std::move(acts));
    }

    // Append the overflow sink and patch placeholder transitions.
    model.sink_state = static_cast<uint32_t>(model.states.size());
    model.mdp.num_states = model.sink_state + 1;
    actions.push_back({MdpAction{{{model.sink_state, Rat(1)}}}});
    for (auto& acts : actions)
        for (auto& action : acts) {
            for (auto& [t, p] : action.transitions)
                if (t == kSinkPlaceholder) t = model.sink_state;
            std::sort(action.transitions.begin(), action.transitions.end());
        }
    model.mdp.actions = std::move(actions);
    model.mdp.initial = {0};

    std::vector<uint32_t> done, exit_states;
    for (uint32_t i = 0; i < model.states.size(); ++i) {
        const ConcreteState& st = model.states[i];
        if (st.terminated()) exit_states.push_back(i);
        if (st.lin.size() == tourists || st.rin.size() == tourists) done.push_back(i);
    }
    model.mdp.labels["done"] = std::move(done);
    model.mdp.labels["exit"] = std::move(exit_states);
    model.mdp.labels["overflow"] = {model.sink_state};
    merge_duplicate_actions(model.mdp);
    model.mdp.validate();
    model.depth.push_back(0); // sink
    return model;
}

// ---------------------------------------------------------------------------
// Abstraction.

int AbstractState::level_diff() const {
    long left = parity_left + 20; // large representative keeps both boards positive
    long right = left - board_diff;
    return static_cast<int>(left / 2 - right / 2);
}

int AbstractState::slot() const {
    if (board_diff == 0) return 0;
    long left = parity_left + 20;
    long right = left - board_diff;
    if (conjugate(right) == left) return 2;
    return 1;
}

bool AbstractState::terminated() const {
    for (const AbsDescriptor& d : descriptors)
        if (d.queue <= 1) return false;
    return true;
}

bool AbstractState::all_in(uint8_t queue) const {
    for (const AbsDescriptor& d : descriptors)
        if (d.queue != queue) return false;
    return true;
}

void AbstractState::canonicalize() { std::sort(descriptors.begin(), descriptors.end()); }

bool AbstractState::consistent() const {
    if (board_diff < -3 || board_diff > 3) return false;
    int lvl = level_diff();
    if (lvl < -1 || lvl > 1) return false;
    for (const AbsDescriptor& d : descriptors) {
        if (d.queue > 3) return false;
        if (d.off_left < -1 || d.off_left > 3 || d.off_right < -1 || d.off_right > 3) return false;
        // Pads on the left-hand side of the system never exceed the right
        // board (they are copies of older right-board values), and dually.
        if ((d.queue == 0 || d.queue == 2) && d.off_right > 0) return false;
        if ((d.queue == 1 || d.queue == 3) && d.off_left > 0) return false;
    }
    return true;
}

AbstractState project(const ConcreteState& s) {
    AbstractState a;
    long diff = s.board_left - s.board_right;
    if (diff < -3 || diff > 3) throw ModelError("projection: board difference out of range");
    a.board_diff = static_cast<int8_t>(diff);
    a.parity_left = static_cast<uint8_t>(s.board_left & 1);
    auto push = [&](uint8_t queue, long pad) {
        AbsDescriptor d;
        d.queue = queue;
        long ol = pad - s.board_left;
        long orr = pad - s.board_right;
        if (ol > 3 || orr > 3) throw ModelError("projection: pad offset out of range");
        d.off_left = clamp_low(ol);
        d.off_right = clamp_low(orr);
        a.descriptors.push_back(d);
    };
    for (long p : s.lout) push(0, p);
    for (long p : s.rout) push(1, p);
    for (long p : s.lin) push(2, p);
    for (long p : s.rin) push(3, p);
    a.canonicalize();
    if (!a.consistent()) throw ModelError("projection: inconsistent abstract state");
    return a;
}

namespace {

AbstractState finish_abs(AbstractState st, AbsDescriptor served_desc, bool sweep_marks) {
    // Round marks only matter while the tourist is still waiting.
    served_desc.served = (sweep_marks && served_desc.queue <= 1) ? 1 : 0;
    st.descriptors.push_back(served_desc);
    if (sweep_marks) {
        bool all_marked = true;
        for (const AbsDescriptor& d : st.descriptors)
            if (d.queue <= 1 && !d.served) all_marked = false;
        if (all_marked)
            for (AbsDescriptor& d : st.descriptors) d.served = 0;
    }
    st.canonicalize();
    if (!st.consistent())
        throw ModelError("abstract transition violates the slot invariants");
    return st;
}

std::vector<std::pair<Rat, AbstractState>> serve_abs(const AbstractState& s, bool left,
                                                     const AbsDescriptor& desc, bool sweep_marks) {
    const uint8_t in_q = left ? 2 : 3;
    const uint8_t other_out_q = left ? 1 : 0;
    assert(desc.queue == (left ? 0 : 1));

    AbstractState base = s;
    auto it = std::find(base.descriptors.begin(), base.descriptors.end(), desc);
    assert(it != base.descriptors.end());
    base.descriptors.erase(it);

    bool in_nonempty = false;
    for (const AbsDescriptor& d : base.descriptors)
        if (d.queue == in_q) in_nonempty = true;

    long own_off = left ? desc.off_left : desc.off_right;
    if (in_nonempty || own_off >= 1) {
        AbsDescriptor nd = desc;
        nd.queue = in_q;
        return {{Rat(1), finish_abs(std::move(base), nd, sweep_marks)}};
    }
    if (own_off == -1) {
        // Pad below the board: copy the board value and cross over.
        AbsDescriptor nd;
        nd.queue = other_out_q;
        if (left) {
            nd.off_left = 0;
            nd.off_right = clamp_low(base.board_diff);
        } else {
            nd.off_right = 0;
            nd.off_left = clamp_low(-base.board_diff);
        }
        return {{Rat(1), finish_abs(std::move(base), nd, sweep_marks)}};
    }
    // Pad equal to the board: coin.
    uint8_t own_parity = left ? s.parity_left : s.parity_right();
    std::vector<std::pair<Rat, AbstractState>> out;
    for (long delta : {2L, own_parity == 0 ? 3L : 1L}) {
        AbstractState st = base;
        long new_diff = static_cast<long>(s.board_diff) + (left ? delta : -delta);
        if (new_diff < -3 || new_diff > 3)
            throw ModelError("abstract transition violates the slot invariants");
        st.board_diff = static_cast<int8_t>(new_diff);
        if (left && (delta & 1)) st.parity_left ^= 1;
        for (AbsDescriptor& d : st.descriptors) {
            int8_t& off = left ? d.off_left : d.off_right;
            off = off < 0 ? int8_t{-1} : clamp_low(static_cast<long>(off) - delta);
        }
        AbsDescriptor nd;
        nd.queue = other_out_q;
        if (left) {
            nd.off_left = 0;
            nd.off_right = clamp_low(st.board_diff);
        } else {
            nd.off_right = 0;
            nd.off_left = clamp_low(-st.board_diff);
        }
        out.push_back({rat(1, 2), finish_abs(std::move(st), nd, sweep_marks)});
    }
    return out;
}

}  // namespace

AbstractModel abstract_mdp(unsigned a, unsigned b, bool sweep_marks) {
    AbstractModel model;
    std::map<AbstractState, uint32_t> index;

    AbstractState init;
    for (unsigned i = 0; i < a; ++i) init.descriptors.push_back(AbsDescriptor{0, 0, 0, 0});
    for (unsigned i = 0; i < b; ++i) init.descriptors.push_back(AbsDescriptor{1, 0, 0, 0});
    init.canonicalize();
    index[init] = 0;
    model.states.push_back(init);

    std::vector<std::vector<MdpAction>> actions;
    size_t head = 0;
    while (head < model.states.size()) {
        AbstractState s = model.states[head];
        uint32_t self = static_cast<uint32_t>(head);
        ++head;
        std::vector<MdpAction> acts;
        if (s.terminated()) {
            acts.push_back(MdpAction{{{self, Rat(1)}}});
            actions.push_back(std::move(acts));
            continue;
        }
        // Demonic choice: side and descriptor class to serve.
        std::vector<AbsDescriptor> classes;
        for (const AbsDescriptor& d : s.descriptors)
            if (d.queue <= 1 && std::find(classes.begin(), classes.end(), d) == classes.end())
                classes.push_back(d);
        for (const AbsDescriptor& d : classes) {
            MdpAction action;
            for (auto& [p, nxt] : serve_abs(s, d.queue == 0, d, sweep_marks)) {
                auto [it, inserted] =
                    index.emplace(nxt, static_cast<uint32_t>(model.states.size()));
                if (inserted) model.states.push_back(nxt);
                bool merged = false;
                for (auto& [t, q] : action.transitions)
                    if (t == it->second) {
                        q += p;
                        merged = true;
                    }
                if (!merged) action.transitions.emplace_back(it->second, p);
            }
            std::sort(action.transitions.begin(), action.transitions.end());
            acts.push_back(std::move(action));
        }
        actions.push_back(std::move(acts));
    }

    model.mdp.num_states = static_cast<uint32_t>(model.states.size());
    model.mdp.actions = std::move(actions);
    model.mdp.initial = {0};
    std::vector<uint32_t> done, exit_states;
    for (uint32_t i = 0; i < model.states.size(); ++i) {
        if (model.states[i].terminated()) exit_states.push_back(i);
        if (model.states[i].all_in(2) || model.states[i].all_in(3)) done.push_back(i);
    }
    model.mdp.labels["done"] = std::move(done);
    model.mdp.labels["exit"] = std::move(exit_states);
    merge_duplicate_actions(model.mdp);
    model.mdp.validate();

    model.sweep_reward.assign(model.mdp.num_states, Rat(0));
    if (sweep_marks) {
        for (uint32_t i = 0; i < model.states.size(); ++i) {
            const AbstractState& st = model.states[i];
            bool waiting = false, any_marked = false;
            for (const AbsDescriptor& d : st.descriptors) {
                if (d.queue <= 1) {
                    waiting = true;
                    if (d.served) any_marked = true;
                }
            }
            // A state with a fresh, unmarked queue starts a new round.
            if (waiting && !any_marked) model.sweep_reward[i] = 1;
        }
    }
    return model;
}

// ---------------------------------------------------------------------------

PaperQueriesReport run_paper_queries(unsigned a, unsigned b, size_t t_max, bool with_sweep) {
    PaperQueriesReport report;
    report.tourists = a + b;
    report.split_left = a;
    report.split_right = b;

    AbstractModel model = abstract_mdp(a, b);
    report.abstract_states = model.mdp.num_states;
    std::vector<bool> done = model.mdp.label_set("done");
    for (size_t T = 0; T <= t_max; ++T) {
        Rat pmin = pbounded(model.mdp, done, T, Query::Mode::Min).values[0];
        Rat pmax = pbounded(model.mdp, done, T, Query::Mode::Max).values[0];
        report.curve.push_back({T, pmin, pmax});
    }
    {
        RewardStructure unit = unit_rewards(model.mdp, done);
        QueryResult mn = expected_reward(model.mdp, done, unit, Query::Mode::Min);
        QueryResult mx = expected_reward(model.mdp, done, unit, Query::Mode::Max);
        report.per_serve.min_infinite = mn.infinite[0];
        report.per_serve.max_infinite = mx.infinite[0];
        report.per_serve.min_value = mn.values[0];
        report.per_serve.max_value = mx.values[0];
    }
    if (with_sweep) {
        AbstractModel marked = abstract_mdp(a, b, true);
        std::vector<bool> mdone = marked.mdp.label_set("done");
        RewardStructure rewards{marked.sweep_reward};
        QueryResult mn = expected_reward(marked.mdp, mdone, rewards, Query::Mode::Min);
        QueryResult mx = expected_reward(marked.mdp, mdone, rewards, Query::Mode::Max);
        RewardSummary sweep;
        sweep.min_infinite = mn.infinite[0];
        sweep.max_infinite = mx.infinite[0];
        sweep.min_value = mn.values[0];
        sweep.max_value = mx.values[0];
        report.sweep = sweep;
    }
    return report;
}

std::string curve_csv(const PaperQueriesReport& report) {
    std::ostringstream os;
    os << "T,pmin,pmax\n";
    os.precision(12);
    for (const CurvePoint& p : report.curve)
        os << p.horizon << "," << rat_double(p.pmin) << "," << rat_double(p.pmax) << "\n";
    return os.str();
}

}  // namespace pexa::rabin
