#include "delayq/model.hpp"

#include <cmath>
#include <fstream>

namespace delayq {

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("model: expected a JSON object");
    ModelSpec m;
    try {
        m.k = j.at("k").get<int>();
        m.interarrival = InterarrivalModel::from_json(j.at("interarrival"));
        m.delays.clear();
        for (const auto& d : j.at("delays")) m.delays.push_back(DelayModel::from_json(d));
        m.delta = j.value("delta", 0.0);
        m.batch = BatchMomentProvider::from_json(j.at("batch"));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("model: malformed JSON: ") + e.what());
    }
    m.validate();
    return m;
}

ModelSpec ModelSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("model file " + path + ": " + e.what());
    }
    return from_json(j);
}

nlohmann::json ModelSpec::to_json() const {
    nlohmann::json delays = nlohmann::json::array();
    for (const auto& d : this->delays) delays.push_back(d.to_json());
    return {{"k", k},
            {"interarrival", interarrival.to_json()},
            {"delays", delays},
            {"delta", delta},
            {"batch", batch.to_json()}};
}

void ModelSpec::validate() const {
    if (k < 1) throw ConfigError("model: k must be >= 1");
    if (static_cast<int>(delays.size()) != k)
        throw ConfigError("model: expected exactly k delay laws");
    if (!(delta >= 0.0) || !std::isfinite(delta))
        throw ConfigError("model: delta must be finite and >= 0");
    if (batch.k() != k) throw ConfigError("model: batch provider dimension differs from k");
}

bool ModelSpec::has_common_exponential_delay() const {
    if (delays.empty()) return false;
    if (!delays.front().is_exponential()) return false;
    double mu = delays.front().exponential_rate();
    for (const auto& d : delays) {
        if (!d.is_exponential()) return false;
        if (std::abs(d.exponential_rate() - mu) > 1e-12 * mu) return false;
    }
    return true;
}

double ModelSpec::common_delay_rate() const {
    if (!has_common_exponential_delay())
        throw NonExponentialDelay(
            "this recursion requires every delay to be exponential with a common rate");
    return delays.front().exponential_rate();
}

}  // namespace delayq
