#include "nnph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnph/error.hpp"

namespace nnph {

std::vector<std::size_t> MlpWeights::widths() const {
    std::vector<std::size_t> out;
    if (layers.empty()) return out;
    out.push_back(layers.front().in_dim());
    for (const auto& layer : layers) out.push_back(layer.out_dim());
    return out;
}

std::size_t MlpWeights::neuron_count() const {
    std::size_t n = 0;
    for (auto w : widths()) n += w;
    return n;
}

void MlpWeights::validate() const {
    if (layers.empty()) throw InputError("network has no layers");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const auto& layer = layers[k];
        const std::string where = "layer " + std::to_string(k);
        if (layer.out_dim() == 0 || layer.in_dim() == 0) throw InputError(where + ": empty weight matrix");
        if (layer.weights.data.size() != layer.out_dim() * layer.in_dim())
            throw InputError(where + ": weight storage does not match its shape");
        if (k > 0 && layer.in_dim() != layers[k - 1].out_dim())
            throw InputError(where + ": in_dim " + std::to_string(layer.in_dim()) +
                             " does not match previous out_dim " + std::to_string(layers[k - 1].out_dim()));
        if (layer.has_bias() && layer.bias.size() != layer.out_dim())
            throw InputError(where + ": bias length " + std::to_string(layer.bias.size()) +
                             " does not match out_dim " + std::to_string(layer.out_dim()));
        auto finite = [](double v) { return std::isfinite(v); };
        if (!std::all_of(layer.weights.data.begin(), layer.weights.data.end(), finite))
            throw InputError(where + ": non-finite weight");
        if (!std::all_of(layer.bias.begin(), layer.bias.end(), finite))
            throw InputError(where + ": non-finite bias");
    }
}

WeightedDigraph::WeightedDigraph(std::size_t num_vertices, std::vector<Edge> edges,
                                 std::vector<VertexLabel> labels)
    : num_vertices_(num_vertices), edges_(std::move(edges)), labels_(std::move(labels)) {
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    if (!labels_.empty() && labels_.size() != num_vertices_)
        throw InputError("vertex label count does not match vertex count");
}

Matrix WeightedDigraph::adjacency() const {
    Matrix a(num_vertices_, num_vertices_);
    for (const auto& e : edges_) a(e.src, e.dst) = e.weight;
    return a;
}

void WeightedDigraph::validate(double min_weight) const {
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.src >= num_vertices_ || e.dst >= num_vertices_)
            throw InputError("edge " + std::to_string(i) + " references a vertex out of range");
        if (e.src == e.dst) throw InputError("self-loop at vertex " + std::to_string(e.src));
        if (!(e.weight >= min_weight && e.weight <= 1.0))
            throw InputError("edge " + std::to_string(e.src) + "->" + std::to_string(e.dst) +
                             " has weight outside (0, 1]");
        if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst)
            throw InputError("duplicate edge " + std::to_string(e.src) + "->" + std::to_string(e.dst));
    }
}

std::vector<double> normalize_weights(std::span<const double> raw_weights, double zeta) {
    if (raw_weights.empty()) throw InputError("cannot normalize an empty weight set");
    if (!(zeta > 0.0 && zeta < 1.0)) throw InputError("zeta must lie in (0, 1)");
    double scale = 0.0;
    for (double w : raw_weights) {
        if (!std::isfinite(w)) throw InputError("non-finite weight");
        scale = std::max(scale, std::abs(w));
    }
    if (scale == 0.0) throw NumericalError("all weights are zero; normalization is undefined");

    std::vector<double> out(raw_weights.size());
    std::transform(raw_weights.begin(), raw_weights.end(), out.begin(),
                   [&](double w) { return std::max(1.0 - std::abs(w) / scale, zeta); });
    return out;
}

WeightedDigraph build_graph(const MlpWeights& mlp, double zeta, BiasMode bias_mode) {
    mlp.validate();
    const auto widths = mlp.widths();

    std::vector<std::size_t> offset(widths.size() + 1, 0);
    for (std::size_t l = 0; l < widths.size(); ++l) offset[l + 1] = offset[l] + widths[l];
    const std::size_t neurons = offset.back();

    std::vector<VertexLabel> labels;
    labels.reserve(neurons);
    for (std::size_t l = 0; l < widths.size(); ++l)
        for (std::size_t i = 0; i < widths[l]; ++i)
            labels.push_back({VertexLabel::Kind::Neuron, static_cast<std::uint32_t>(l),
                              static_cast<std::uint32_t>(i)});

    // Raw edges in layer order; orientation is fixed once the sign is known.
    struct RawEdge {
        VertexId from;
        VertexId to;
        double raw;
    };
    std::vector<RawEdge> raw;
    std::size_t total = 0;
    for (const auto& layer : mlp.layers) total += layer.weights.data.size() + layer.bias.size();
    raw.reserve(total);

    for (std::size_t k = 0; k < mlp.layers.size(); ++k) {
        const auto& layer = mlp.layers[k];
        const std::size_t src_base = offset[k];
        const std::size_t dst_base = offset[k + 1];
        for (std::size_t o = 0; o < layer.out_dim(); ++o)
            for (std::size_t i = 0; i < layer.in_dim(); ++i)
                raw.push_back({static_cast<VertexId>(src_base + i), static_cast<VertexId>(dst_base + o),
                               layer.weights(o, i)});
    }
    for (std::size_t k = 0; k < mlp.layers.size(); ++k) {
        const auto& layer = mlp.layers[k];
        if (!layer.has_bias()) continue;
        const auto target_layer = static_cast<std::uint32_t>(k + 1);
        if (bias_mode == BiasMode::PerLayer) {
            const auto bias_vertex = static_cast<VertexId>(labels.size());
            labels.push_back({VertexLabel::Kind::Bias, target_layer, 0});
            for (std::size_t o = 0; o < layer.out_dim(); ++o)
                raw.push_back({bias_vertex, static_cast<VertexId>(offset[k + 1] + o), layer.bias[o]});
        } else {
            for (std::size_t o = 0; o < layer.out_dim(); ++o) {
                const auto bias_vertex = static_cast<VertexId>(labels.size());
                labels.push_back({VertexLabel::Kind::Bias, target_layer, static_cast<std::uint32_t>(o)});
                raw.push_back({bias_vertex, static_cast<VertexId>(offset[k + 1] + o), layer.bias[o]});
            }
        }
    }

    std::vector<double> pooled(raw.size());
    std::transform(raw.begin(), raw.end(), pooled.begin(), [](const RawEdge& e) { return e.raw; });
    const auto normalized = normalize_weights(pooled, zeta);

    std::vector<Edge> edges(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const auto& r = raw[i];
        edges[i] = r.raw >= 0.0 ? Edge{r.from, r.to, normalized[i]} : Edge{r.to, r.from, normalized[i]};
    }

    const std::size_t vertex_count = labels.size();
    WeightedDigraph g(vertex_count, std::move(edges), std::move(labels));
    g.set_layer_widths(widths);
    return g;
}

WeightedDigraph permute_neurons(const WeightedDigraph& g,
                                const std::vector<std::vector<std::uint32_t>>& perms) {
    const auto widths = g.layer_widths();
    if (g.labels().empty() || widths.empty())
        throw InputError("permute_neurons needs a graph with layer labels");
    if (perms.size() != widths.size())
        throw InputError("expected " + std::to_string(widths.size()) + " per-layer permutations, got " +
                         std::to_string(perms.size()));
    for (std::size_t l = 0; l < perms.size(); ++l) {
        if (perms[l].size() != widths[l])
            throw InputError("permutation for layer " + std::to_string(l) + " has wrong length");
        std::vector<bool> seen(widths[l], false);
        for (auto p : perms[l]) {
            if (p >= widths[l] || seen[p])
                throw InputError("permutation for layer " + std::to_string(l) + " is not a bijection");
            seen[p] = true;
        }
    }

    std::vector<std::size_t> offset(widths.size() + 1, 0);
    for (std::size_t l = 0; l < widths.size(); ++l) offset[l + 1] = offset[l] + widths[l];

    const auto labels = g.labels();
    std::vector<VertexId> new_id(g.num_vertices());
    std::vector<VertexLabel> new_labels(labels.begin(), labels.end());
    // Per-neuron bias vertices are reordered among themselves so that the
    // bias block keeps the same target order as the neuron block.
    std::vector<VertexId> bias_ids;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const auto& lab = labels[v];
        if (lab.kind == VertexLabel::Kind::Neuron) {
            new_id[v] = static_cast<VertexId>(offset[lab.layer] + perms[lab.layer][lab.index]);
            new_labels[new_id[v]] = {lab.kind, lab.layer, perms[lab.layer][lab.index]};
        } else {
            new_id[v] = v;
            bias_ids.push_back(v);
        }
    }
    // PerNeuron bias vertices: within each target layer, slot order follows the permuted target.
    for (std::size_t i = 0; i < bias_ids.size();) {
        std::size_t j = i;
        const auto layer = labels[bias_ids[i]].layer;
        while (j < bias_ids.size() && labels[bias_ids[j]].layer == layer) ++j;
        if (j - i > 1) {
            for (std::size_t b = i; b < j; ++b) {
                const auto& lab = labels[bias_ids[b]];
                const auto slot = bias_ids[i] + perms[layer][lab.index];
                new_id[bias_ids[b]] = static_cast<VertexId>(slot);
                new_labels[slot] = {lab.kind, lab.layer, perms[layer][lab.index]};
            }
        }
        i = j;
    }

    std::vector<Edge> edges(g.edges().begin(), g.edges().end());
    for (auto& e : edges) {
        e.src = new_id[e.src];
        e.dst = new_id[e.dst];
    }
    WeightedDigraph out(g.num_vertices(), std::move(edges), std::move(new_labels));
    out.set_layer_widths(std::vector<std::size_t>(widths.begin(), widths.end()));
    return out;
}

}  // namespace nnph
