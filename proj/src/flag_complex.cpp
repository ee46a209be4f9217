#include "nnph/flag_complex.hpp"

#include <algorithm>
#include <atomic>
#include <string>
#include <thread>

#include "nnph/error.hpp"

namespace nnph {

bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b) {
    if (a.filtration != b.filtration) return a.filtration < b.filtration;
    if (a.dim != b.dim) return a.dim < b.dim;
    return std::lexicographical_compare(a.vertices.begin(), a.vertices.begin() + a.dim + 1,
                                        b.vertices.begin(), b.vertices.begin() + b.dim + 1);
}

FilteredComplex::FilteredComplex(std::vector<FilteredSimplex> simplices, std::size_t max_dim, bool sort)
    : simplices_(std::move(simplices)), max_dim_(max_dim) {
    if (sort) std::sort(simplices_.begin(), simplices_.end(), filtration_less);
}

std::size_t FilteredComplex::count(std::size_t dim) const {
    return static_cast<std::size_t>(std::count_if(simplices_.begin(), simplices_.end(),
                                                  [dim](const FilteredSimplex& s) { return s.dim == dim; }));
}

bool FilteredComplex::is_sorted() const {
    return std::is_sorted(simplices_.begin(), simplices_.end(), filtration_less);
}

namespace {

// Out-neighbour lists in CSR form, sorted by target.
struct OutAdjacency {
    std::vector<std::size_t> offsets;
    std::vector<VertexId> targets;
    std::vector<double> weights;

    OutAdjacency(const WeightedDigraph& g, FiltrationDirection direction)
        : offsets(g.num_vertices() + 1, 0) {
        const auto edges = g.edges();  // sorted by (src, dst)
        targets.reserve(edges.size());
        weights.reserve(edges.size());
        for (const auto& e : edges) {
            ++offsets[e.src + 1];
            targets.push_back(e.dst);
            weights.push_back(direction == FiltrationDirection::Superlevel ? 1.0 - e.weight : e.weight);
        }
        for (std::size_t v = 0; v < g.num_vertices(); ++v) offsets[v + 1] += offsets[v];
    }

    std::span<const VertexId> out(VertexId v) const {
        return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::span<const double> out_weights(VertexId v) const {
        return {weights.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
};

// Candidate extension vertex and the max weight of the edges reaching it from
// every vertex of the current prefix.
struct Candidate {
    VertexId vertex;
    double max_weight;
};

class CliqueWalker {
public:
    CliqueWalker(const OutAdjacency& adj, std::size_t max_dim, std::vector<FilteredSimplex>& out)
        : adj_(adj), max_dim_(max_dim), out_(out), levels_(max_dim + 1) {}

    void run_from(VertexId root) {
        FilteredSimplex s;
        s.vertices[0] = root;
        s.dim = 0;
        s.filtration = 0.0;
        out_.push_back(s);
        if (max_dim_ == 0) return;

        auto& first = levels_[1];
        first.clear();
        const auto targets = adj_.out(root);
        const auto weights = adj_.out_weights(root);
        for (std::size_t i = 0; i < targets.size(); ++i) first.push_back({targets[i], weights[i]});
        extend(s, 1);
    }

private:
    // levels_[depth] holds the candidates for position `depth` of the clique.
    void extend(FilteredSimplex& prefix, std::size_t depth) {
        const auto& candidates = levels_[depth];
        for (const auto& c : candidates) {
            FilteredSimplex s = prefix;
            s.vertices[depth] = c.vertex;
            s.dim = static_cast<std::uint8_t>(depth);
            s.filtration = std::max(prefix.filtration, c.max_weight);
            out_.push_back(s);
            if (depth == max_dim_) continue;

            auto& next = levels_[depth + 1];
            next.clear();
            intersect(candidates, c.vertex, next);
            if (!next.empty()) extend(s, depth + 1);
        }
    }

    // next = candidates ∩ out(v), with max weights updated by the edges v -> x.
    void intersect(const std::vector<Candidate>& candidates, VertexId v, std::vector<Candidate>& next) const {
        const auto targets = adj_.out(v);
        const auto weights = adj_.out_weights(v);
        std::size_t i = 0, j = 0;
        while (i < candidates.size() && j < targets.size()) {
            if (candidates[i].vertex < targets[j]) {
                ++i;
            } else if (targets[j] < candidates[i].vertex) {
                ++j;
            } else {
                next.push_back({targets[j], std::max(candidates[i].max_weight, weights[j])});
                ++i;
                ++j;
            }
        }
    }

    const OutAdjacency& adj_;
    std::size_t max_dim_;
    std::vector<FilteredSimplex>& out_;
    std::vector<std::vector<Candidate>> levels_;
};

}  // namespace

FilteredComplex enumerate_simplices(const WeightedDigraph& g, const FlagComplexOptions& options) {
    if (options.max_dim > kMaxSimplexDim)
        throw InputError("max_dim " + std::to_string(options.max_dim) + " exceeds " +
                         std::to_string(kMaxSimplexDim));
    g.validate(0.0);

    const OutAdjacency adj(g, options.direction);
    const std::size_t n = g.num_vertices();
    const unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n)));

    std::vector<FilteredSimplex> simplices;
    if (workers <= 1) {
        CliqueWalker walker(adj, options.max_dim, simplices);
        for (VertexId v = 0; v < n; ++v) walker.run_from(v);
    } else {
        std::vector<std::vector<FilteredSimplex>> parts(workers);
        std::atomic<std::size_t> next_root{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                CliqueWalker walker(adj, options.max_dim, parts[w]);
                for (std::size_t v; (v = next_root.fetch_add(1)) < n;) walker.run_from(static_cast<VertexId>(v));
            });
        }
        for (auto& t : pool) t.join();
        std::size_t total = 0;
        for (const auto& p : parts) total += p.size();
        simplices.reserve(total);
        for (auto& p : parts) simplices.insert(simplices.end(), p.begin(), p.end());
    }
    // The canonical sort makes the result independent of worker scheduling.
    return FilteredComplex(std::move(simplices), options.max_dim);
}

double filtration_value(std::span<const VertexId> simplex, const WeightedDigraph& g) {
    if (simplex.empty() || simplex.size() > kMaxSimplexDim + 1) throw InputError("bad simplex size");
    for (auto v : simplex)
        if (v >= g.num_vertices()) throw InputError("simplex vertex out of range");
    if (simplex.size() == 1) return 0.0;

    const auto edges = g.edges();
    double value = 0.0;
    for (std::size_t i = 0; i < simplex.size(); ++i) {
        for (std::size_t j = i + 1; j < simplex.size(); ++j) {
            const Edge key{simplex[i], simplex[j], 0.0};
            auto it = std::lower_bound(edges.begin(), edges.end(), key, [](const Edge& a, const Edge& b) {
                return a.src != b.src ? a.src < b.src : a.dst < b.dst;
            });
            if (it == edges.end() || it->src != key.src || it->dst != key.dst)
                throw InputError("not an ordered clique: missing edge " + std::to_string(key.src) + "->" +
                                 std::to_string(key.dst));
            value = std::max(value, it->weight);
        }
    }
    return value;
}

}  // namespace nnph
