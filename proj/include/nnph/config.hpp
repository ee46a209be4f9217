#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnph/diagram_ops.hpp"
#include "nnph/distances.hpp"
#include "nnph/flag_complex.hpp"
#include "nnph/graph.hpp"

namespace nnph {

/// Every tunable of the pipeline. Serialized next to every output.
struct PipelineConfig {
    double zeta = kDefaultZeta;
    BiasMode bias_mode = BiasMode::PerLayer;
    double eta = kDefaultEta;
    double infinity_cap = kDefaultInfinityCap;
    std::size_t max_degree = kDefaultMaxDegree;
    bool superlevel = false;
    Grid grid;
    double sigma = kDefaultHeatSigma;
    std::size_t landscape_layers = kDefaultLandscapeLayers;
    double silhouette_power = kDefaultSilhouettePower;
    Measure measure = Measure::Heat;
    double distance_p = 2.0;
    std::vector<double> degree_weights;  // empty: weight 1 for every degree
    std::uint64_t seed = 0;
    unsigned workers = 1;

    /// Throws InputError naming the first out-of-range field.
    void validate() const;

    VectorParams vector_params(VectorKind kind) const;
    FlagComplexOptions complex_options() const;

    /// JSON text with a stable key order.
    std::string to_json() const;
    /// Missing keys keep the values already present in `base`.
    static PipelineConfig from_json(const std::string& text, const PipelineConfig& base);
    static PipelineConfig from_json(const std::string& text);

    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

}  // namespace nnph
