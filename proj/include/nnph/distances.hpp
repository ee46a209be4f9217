#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nnph/diagram_ops.hpp"
#include "nnph/graph.hpp"
#include "nnph/vectorize.hpp"

namespace nnph {

enum class VectorKind { Landscape, Silhouette, Heat };
enum class Measure { Heat, Silhouette, Landscape, Norm1, Frobenius };

std::string_view to_string(VectorKind kind);
std::string_view to_string(Measure measure);
std::optional<Measure> parse_measure(std::string_view name);
bool is_baseline(Measure measure);
/// Vectorization kind behind a vectorization measure; throws for baselines.
VectorKind vector_kind(Measure measure);

struct VectorParams {
    VectorKind kind = VectorKind::Heat;
    Grid grid;
    std::size_t landscape_layers = kDefaultLandscapeLayers;
    double silhouette_power = kDefaultSilhouettePower;
    double sigma = kDefaultHeatSigma;

    friend bool operator==(const VectorParams&, const VectorParams&) = default;
};

/// One network's vectorized diagram: a flattened vectorization per homology degree.
struct PersistenceVectorization {
    VectorParams params;
    std::vector<std::vector<double>> degrees;
};

PersistenceVectorization vectorize(const CleanDiagram& diagram, const VectorParams& params);

/// Sum over degrees of degree_weights[d] times the L^p distance of the sampled
/// functions (trapezoidal quadrature). Empty weights mean 1 for every degree.
/// Landscapes at p = 2 go through landscape_distance.
double vector_distance(const PersistenceVectorization& a, const PersistenceVectorization& b, double p = 2.0,
                       std::span<const double> degree_weights = {});

/// Entrywise 1-norm or Frobenius norm of a - b. Throws InputError on shape mismatch.
double baseline_norm_distance(const Matrix& a, const Matrix& b, Measure kind);

struct DistanceMatrix {
    std::vector<std::string> labels;
    Measure measure = Measure::Heat;
    Matrix mean;
    Matrix std;
};

struct AssembleOptions {
    double p = 2.0;
    std::vector<double> degree_weights;
    unsigned threads = 1;
};

/// mean/std over all cross-run pairings of experiments i and j; self-pairs
/// are skipped on the diagonal. runs[i] holds experiment i's runs.
DistanceMatrix assemble_matrix(const std::vector<std::string>& labels,
                               const std::vector<std::vector<PersistenceVectorization>>& runs, Measure measure,
                               const AssembleOptions& options = {});

/// Baseline counterpart over adjacency matrices.
DistanceMatrix assemble_baseline_matrix(const std::vector<std::string>& labels,
                                        const std::vector<std::vector<Matrix>>& runs, Measure measure,
                                        unsigned threads = 1);

}  // namespace nnph
