#include "nnph/pipeline.hpp"

#include "nnph/flag_complex.hpp"

namespace nnph {

PersistenceDiagram graph_persistence(const WeightedDigraph& g, const PipelineConfig& config) {
    const auto complex = enumerate_simplices(g, config.complex_options());
    return compute_persistence(complex, config.max_degree);
}

CleanDiagram clean(const PersistenceDiagram& d, const PipelineConfig& config) {
    return cap_infinity(filter_diagram(d, config.eta), config.infinity_cap);
}

CleanDiagram network_diagram(const MlpWeights& mlp, const PipelineConfig& config) {
    const auto g = build_graph(mlp, config.zeta, config.bias_mode);
    return clean(graph_persistence(g, config), config);
}

}  // namespace nnph
