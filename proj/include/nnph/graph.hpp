#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace nnph {

using VertexId = std::uint32_t;

inline constexpr double kDefaultZeta = 1e-6;

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// One fully connected layer: weights are [out_dim x in_dim], bias may be empty.
struct DenseLayer {
    Matrix weights;
    std::vector<double> bias;

    std::size_t in_dim() const { return weights.cols; }
    std::size_t out_dim() const { return weights.rows; }
    bool has_bias() const { return !bias.empty(); }
};

struct MlpWeights {
    std::vector<DenseLayer> layers;

    /// Neuron counts per neuron layer: input width first, then each layer's out_dim.
    std::vector<std::size_t> widths() const;
    std::size_t neuron_count() const;

    // Throws InputError on broken chaining, bias length mismatch or non-finite entries.
    void validate() const;
};

enum class BiasMode {
    PerLayer,   // one shared bias vertex per layer
    PerNeuron,  // one bias vertex per biased neuron
};

struct VertexLabel {
    enum class Kind : std::uint8_t { Neuron, Bias };
    Kind kind = Kind::Neuron;
    std::uint32_t layer = 0;  // neuron layer index; for bias vertices, the layer they feed
    std::uint32_t index = 0;  // position within the layer (bias: target neuron in PerNeuron mode)

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

struct Edge {
    VertexId src = 0;
    VertexId dst = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Loop-free digraph with at most one edge per ordered pair. Edges are kept
/// sorted by (src, dst).
class WeightedDigraph {
public:
    WeightedDigraph() = default;
    WeightedDigraph(std::size_t num_vertices, std::vector<Edge> edges,
                    std::vector<VertexLabel> labels = {});

    std::size_t num_vertices() const { return num_vertices_; }
    std::span<const Edge> edges() const { return edges_; }
    std::span<const VertexLabel> labels() const { return labels_; }

    /// Layer widths recorded by build_graph (empty for graphs read from disk).
    std::span<const std::size_t> layer_widths() const { return layer_widths_; }
    void set_layer_widths(std::vector<std::size_t> widths) { layer_widths_ = std::move(widths); }

    /// Dense adjacency with edge weights, 0 where no edge.
    Matrix adjacency() const;

    /// Checks the invariants: ids in range, no loops, no duplicates, weight in [lo, 1].
    void validate(double min_weight) const;

    friend bool operator==(const WeightedDigraph&, const WeightedDigraph&) = default;

private:
    std::size_t num_vertices_ = 0;
    std::vector<Edge> edges_;
    std::vector<VertexLabel> labels_;
    std::vector<std::size_t> layer_widths_;
};

/// max(1 - |w| / max(|max W|, |min W|), zeta) for every w.
std::vector<double> normalize_weights(std::span<const double> raw_weights, double zeta = kDefaultZeta);

/// Encodes an MLP as a weighted digraph. Negative parameters reverse the
/// edge; all weights and biases are normalized over one pooled set.
WeightedDigraph build_graph(const MlpWeights& mlp, double zeta = kDefaultZeta,
                            BiasMode bias_mode = BiasMode::PerLayer);

/// Relabels neurons within each layer. perms[l][i] is the new position of
/// neuron i of neuron layer l. Bias vertices keep their ids in PerLayer mode
/// and follow their neuron in PerNeuron mode.
WeightedDigraph permute_neurons(const WeightedDigraph& g,
                                const std::vector<std::vector<std::uint32_t>>& perms);

}  // namespace nnph
