#include "marl/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace marl {

using nlohmann::json;

std::string model_to_json(const DecPomdpModel& m) {
    json j;
    j["name"] = m.name;
    j["num_agents"] = m.num_agents;
    j["num_states"] = m.num_states;
    j["num_actions"] = m.num_actions;
    j["num_observations"] = m.num_observations;
    j["gamma"] = m.gamma;
    j["horizon"] = m.horizon;
    j["initial_state"] = m.initial_state;
    j["transition"] = m.transition;
    j["observation"] = m.observation;
    j["reward"] = m.reward;
    j["terminal"] = m.terminal;
    if (m.has_initial_observation()) j["initial_observation"] = m.initial_observation;
    return j.dump(2);
}

DecPomdpModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, std::string("model JSON parse failure: ") + e.what());
    }
    DecPomdpModel m;
    try {
        m.name = j.value("name", std::string{});
        m.num_agents = j.at("num_agents").get<int>();
        m.num_states = j.at("num_states").get<int>();
        m.num_actions = j.at("num_actions").get<std::vector<int>>();
        m.num_observations = j.at("num_observations").get<std::vector<int>>();
        m.gamma = j.at("gamma").get<double>();
        m.horizon = j.value("horizon", 0);
        m.initial_state = j.at("initial_state").get<std::vector<double>>();
        m.transition = j.at("transition").get<std::vector<double>>();
        m.observation = j.at("observation").get<std::vector<double>>();
        m.reward = j.at("reward").get<std::vector<double>>();
        m.terminal = j.at("terminal").get<std::vector<uint8_t>>();
        if (j.contains("initial_observation"))
            m.initial_observation = j.at("initial_observation").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, std::string("model JSON field failure: ") + e.what());
    }
    m.validate(1e-9);
    return m;
}

void save_model(const DecPomdpModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::io, "cannot open for write: " + path);
    out << model_to_json(model);
}

DecPomdpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open model file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return model_from_json(text);
}

} // namespace marl
