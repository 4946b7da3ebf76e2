#include <fstream>
#include <set>

#include <json.hpp>

#include "liqshift/errors.hpp"
#include "liqshift/io.hpp"

namespace liqshift {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys{"schema", "horizon", "mu_A", "mu_B", "alpha", "beta",
                                  "eta_A",  "eta_B",   "beta_A", "beta_B"};

json matrix(const Matrix2& m) { return json::array({json::array({m[0][0], m[0][1]}), json::array({m[1][0], m[1][1]})}); }

Matrix2 read_matrix(const json& j, const char* key) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() || j[1].size() != 2) {
        throw InvalidConfig(std::string("'") + key + "' must be a 2x2 array");
    }
    Matrix2 m{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t k = 0; k < 2; ++k) m[i][k] = j[i][k].get<double>();
    }
    return m;
}

}  // namespace

std::string params_to_json(const HawkesParams& p) {
    json j;
    j["schema"] = kParamsSchema;
    j["horizon"] = p.horizon;
    j["mu_A"] = p.mu[0];
    j["mu_B"] = p.mu[1];
    j["alpha"] = matrix(p.alpha);
    j["beta"] = matrix(p.decay);
    j["eta_A"] = p.eta[0];
    j["eta_B"] = p.eta[1];
    j["beta_A"] = p.mark_rate[0];
    j["beta_B"] = p.mark_rate[1];
    return j.dump(2) + "\n";
}

HawkesParams params_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("params JSON: ") + e.what());
    }
    if (!j.is_object()) throw InvalidConfig("params JSON must be an object");
    for (const auto& [key, _] : j.items()) {
        if (!kKeys.count(key)) throw InvalidConfig("params JSON: unknown key '" + key + "'");
    }
    for (const auto& key : kKeys) {
        if (!j.contains(key)) throw InvalidConfig("params JSON: missing key '" + key + "'");
    }
    try {
        if (j["schema"].get<int>() != kParamsSchema) {
            throw InvalidConfig("params JSON: unsupported schema " + j["schema"].dump());
        }
        HawkesParams p;
        p.horizon = j["horizon"].get<double>();
        p.mu[0] = j["mu_A"].get<std::vector<double>>();
        p.mu[1] = j["mu_B"].get<std::vector<double>>();
        p.alpha = read_matrix(j["alpha"], "alpha");
        p.decay = read_matrix(j["beta"], "beta");
        p.eta = {j["eta_A"].get<double>(), j["eta_B"].get<double>()};
        p.mark_rate = {j["beta_A"].get<double>(), j["beta_B"].get<double>()};
        p.validate();
        return p;
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("params JSON: ") + e.what());
    }
}

HawkesParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return params_from_json(text);
}

void save_params(const std::string& path, const HawkesParams& p) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << params_to_json(p);
}

}  // namespace liqshift
