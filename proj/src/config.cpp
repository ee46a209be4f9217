#include "nnph/config.hpp"

#include <cmath>
#include <json.hpp>

#include "nnph/error.hpp"

namespace nnph {

void PipelineConfig::validate() const {
    auto fail = [](const std::string& what) { throw InputError("config: " + what); };
    if (!(zeta > 0.0 && zeta < 1.0)) fail("zeta must lie in (0, 1)");
    if (!(eta >= 0.0) || !std::isfinite(eta)) fail("eta must be a finite value >= 0");
    if (!std::isfinite(infinity_cap)) fail("infinity_cap must be finite");
    if (max_degree > kMaxSimplexDim - 1) fail("max_degree must be at most 3");
    grid.validate();
    if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be positive");
    if (landscape_layers < 1) fail("landscape_layers must be >= 1");
    if (!(silhouette_power > 0.0) || !std::isfinite(silhouette_power)) fail("silhouette_power must be positive");
    if (!(distance_p >= 1.0) || !std::isfinite(distance_p)) fail("distance_p must be >= 1");
    for (double w : degree_weights)
        if (!(w >= 0.0) || !std::isfinite(w)) fail("degree_weights must be finite and non-negative");
    if (!degree_weights.empty() && degree_weights.size() < max_degree + 1)
        fail("degree_weights needs one entry per degree 0..max_degree");
    if (workers < 1) fail("workers must be >= 1");
}

VectorParams PipelineConfig::vector_params(VectorKind kind) const {
    return {kind, grid, landscape_layers, silhouette_power, sigma};
}

FlagComplexOptions PipelineConfig::complex_options() const {
    return {max_degree + 1,
            superlevel ? FiltrationDirection::Superlevel : FiltrationDirection::Sublevel, workers};
}

std::string PipelineConfig::to_json() const {
    nlohmann::ordered_json j;
    j["zeta"] = zeta;
    j["bias_mode"] = bias_mode == BiasMode::PerLayer ? "layer" : "neuron";
    j["eta"] = eta;
    j["infinity_cap"] = infinity_cap;
    j["max_degree"] = max_degree;
    j["superlevel"] = superlevel;
    j["grid"] = {{"t_min", grid.t_min}, {"t_max", grid.t_max}, {"resolution", grid.resolution}};
    j["sigma"] = sigma;
    j["landscape_layers"] = landscape_layers;
    j["silhouette_power"] = silhouette_power;
    j["measure"] = std::string(to_string(measure));
    j["distance_p"] = distance_p;
    j["degree_weights"] = degree_weights;
    j["seed"] = seed;
    j["workers"] = workers;
    return j.dump(2) + "\n";
}

PipelineConfig PipelineConfig::from_json(const std::string& text, const PipelineConfig& base) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw InputError("config: top level must be an object");

    PipelineConfig c = base;
    try {
        if (j.contains("zeta")) c.zeta = j.at("zeta").get<double>();
        if (j.contains("bias_mode")) {
            const auto mode = j.at("bias_mode").get<std::string>();
            if (mode == "layer") c.bias_mode = BiasMode::PerLayer;
            else if (mode == "neuron") c.bias_mode = BiasMode::PerNeuron;
            else throw InputError("config: bias_mode must be 'layer' or 'neuron'");
        }
        if (j.contains("eta")) c.eta = j.at("eta").get<double>();
        if (j.contains("infinity_cap")) c.infinity_cap = j.at("infinity_cap").get<double>();
        if (j.contains("max_degree")) c.max_degree = j.at("max_degree").get<std::size_t>();
        if (j.contains("superlevel")) c.superlevel = j.at("superlevel").get<bool>();
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("t_min")) c.grid.t_min = g.at("t_min").get<double>();
            if (g.contains("t_max")) c.grid.t_max = g.at("t_max").get<double>();
            if (g.contains("resolution")) c.grid.resolution = g.at("resolution").get<std::size_t>();
        }
        if (j.contains("sigma")) c.sigma = j.at("sigma").get<double>();
        if (j.contains("landscape_layers")) c.landscape_layers = j.at("landscape_layers").get<std::size_t>();
        if (j.contains("silhouette_power")) c.silhouette_power = j.at("silhouette_power").get<double>();
        if (j.contains("measure")) {
            const auto name = j.at("measure").get<std::string>();
            const auto m = parse_measure(name);
            if (!m) throw InputError("config: unknown measure '" + name + "'");
            c.measure = *m;
        }
        if (j.contains("distance_p")) c.distance_p = j.at("distance_p").get<double>();
        if (j.contains("degree_weights")) c.degree_weights = j.at("degree_weights").get<std::vector<double>>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("workers")) c.workers = j.at("workers").get<unsigned>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::from_json(const std::string& text) { return from_json(text, PipelineConfig{}); }

}  // namespace nnph
