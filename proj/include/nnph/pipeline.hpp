#pragma once

#include "nnph/config.hpp"
#include "nnph/diagram_ops.hpp"
#include "nnph/distances.hpp"
#include "nnph/graph.hpp"
#include "nnph/persistence.hpp"

namespace nnph {

/// Flag complex plus persistence, before any post-processing.
PersistenceDiagram graph_persistence(const WeightedDigraph& g, const PipelineConfig& config);

/// eta filter followed by infinity capping.
CleanDiagram clean(const PersistenceDiagram& d, const PipelineConfig& config);

/// weights -> graph -> persistence -> clean diagram.
CleanDiagram network_diagram(const MlpWeights& mlp, const PipelineConfig& config);

}  // namespace nnph
