#include "pexa/mdp_io.hpp"

#include <sstream>

namespace pexa {

nlohmann::json mdp_to_json(const Mdp& m) {
    nlohmann::json j;
    j["states"] = m.num_states;
    j["initial"] = m.initial;
    nlohmann::json labels = nlohmann::json::object();
    for (const auto& [name, states] : m.labels) labels[name] = states;
    j["labels"] = labels;
    nlohmann::json actions = nlohmann::json::array();
    for (const auto& acts : m.actions) {
        nlohmann::json per_state = nlohmann::json::array();
        for (const MdpAction& a : acts) {
            nlohmann::json trans = nlohmann::json::array();
            for (const auto& [t, p] : a.transitions)
                trans.push_back(nlohmann::json::array({t, rat_str(p)}));
            per_state.push_back(trans);
        }
        actions.push_back(per_state);
    }
    j["actions"] = actions;
    return j;
}

Mdp mdp_from_json(const nlohmann::json& j) {
    Mdp m;
    m.num_states = j.at("states").get<uint32_t>();
    m.initial = j.at("initial").get<std::vector<uint32_t>>();
    if (j.contains("labels"))
        for (const auto& [name, states] : j.at("labels").items())
            m.labels[name] = states.get<std::vector<uint32_t>>();
    for (const auto& per_state : j.at("actions")) {
        std::vector<MdpAction> acts;
        for (const auto& trans : per_state) {
            MdpAction a;
            for (const auto& entry : trans)
                a.transitions.emplace_back(entry.at(0).get<uint32_t>(),
                                           rat_from_string(entry.at(1).get<std::string>()));
            acts.push_back(std::move(a));
        }
        m.actions.push_back(std::move(acts));
    }
    m.validate();
    return m;
}

std::string mdp_to_prism_tra(const Mdp& m) {
    size_t choices = 0;
    size_t transitions = 0;
    for (const auto& acts : m.actions) {
        choices += acts.size();
        for (const MdpAction& a : acts) transitions += a.transitions.size();
    }
    std::ostringstream os;
    os << m.num_states << " " << choices << " " << transitions << "\n";
    for (uint32_t s = 0; s < m.num_states; ++s) {
        for (size_t ai = 0; ai < m.actions[s].size(); ++ai) {
            for (const auto& [t, p] : m.actions[s][ai].transitions)
                os << s << " " << ai << " " << t << " " << rat_str(p) << "\n";
        }
    }
    return os.str();
}

std::string mdp_to_prism_lab(const Mdp& m) {
    std::ostringstream os;
    os << "0=\"init\"";
    std::vector<std::string> names;
    for (const auto& [name, states] : m.labels) names.push_back(name);
    for (size_t i = 0; i < names.size(); ++i) os << " " << (i + 1) << "=\"" << names[i] << "\"";
    os << "\n";
    std::map<uint32_t, std::vector<size_t>> per_state;
    for (uint32_t s : m.initial) per_state[s].push_back(0);
    for (size_t i = 0; i < names.size(); ++i)
        for (uint32_t s : m.labels.at(names[i])) per_state[s].push_back(i + 1);
    for (const auto& [s, ids] : per_state) {
        os << s << ":";
        for (size_t id : ids) os << " " << id;
        os << "\n";
    }
    return os.str();
}

}  // namespace pexa
