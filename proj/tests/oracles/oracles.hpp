#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library's enumeration, reduction or matching code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "nnph/graph.hpp"
#include "nnph/persistence.hpp"

namespace oracle {

struct Simplex {
    std::vector<std::uint32_t> vertices;
    double filtration = 0.0;
    int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

using WeightMap = std::map<std::pair<std::uint32_t, std::uint32_t>, double>;

inline WeightMap weight_map(const nnph::WeightedDigraph& g) {
    WeightMap w;
    for (const auto& e : g.edges()) w[{e.src, e.dst}] = e.weight;
    return w;
}

/// Every ordered tuple of distinct vertices, kept if all forward pairs are edges.
inline std::vector<Simplex> brute_force_cliques(const nnph::WeightedDigraph& g, int max_dim) {
    const auto w = weight_map(g);
    const auto n = static_cast<std::uint32_t>(g.num_vertices());
    std::vector<Simplex> out;
    std::vector<std::uint32_t> tuple;
    std::vector<bool> used(n, false);
    std::function<void()> rec = [&] {
        if (!tuple.empty()) {
            bool clique = true;
            double f = 0.0;
            for (std::size_t i = 0; i < tuple.size() && clique; ++i)
                for (std::size_t j = i + 1; j < tuple.size(); ++j) {
                    auto it = w.find({tuple[i], tuple[j]});
                    if (it == w.end()) {
                        clique = false;
                        break;
                    }
                    f = std::max(f, it->second);
                }
            if (clique) out.push_back({tuple, f});
        }
        if (static_cast<int>(tuple.size()) == max_dim + 1) return;
        for (std::uint32_t v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = true;
            tuple.push_back(v);
            rec();
            tuple.pop_back();
            used[v] = false;
        }
    };
    rec();
    return out;
}

using Bits = std::vector<std::uint64_t>;

inline void flip(Bits& b, std::size_t i) { b[i / 64] ^= std::uint64_t{1} << (i % 64); }
inline bool test(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1u; }
inline void xor_into(Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}
inline long lowest(const Bits& b) {
    for (std::size_t w = b.size(); w-- > 0;)
        if (b[w]) return static_cast<long>(w * 64 + 63 - static_cast<std::size_t>(__builtin_clzll(b[w])));
    return -1;
}

/// Orders by (filtration, dim, reverse-lexicographic vertices): a different
/// tie-break from the library, which must not change the diagram.
inline void oracle_sort(std::vector<Simplex>& s) {
    std::sort(s.begin(), s.end(), [](const Simplex& a, const Simplex& b) {
        if (a.filtration != b.filtration) return a.filtration < b.filtration;
        if (a.dim() != b.dim()) return a.dim() < b.dim();
        return a.vertices > b.vertices;
    });
}

/// Dense boundary matrix columns over Z2.
inline std::vector<Bits> dense_boundary(const std::vector<Simplex>& s) {
    std::map<std::vector<std::uint32_t>, std::size_t> index;
    for (std::size_t i = 0; i < s.size(); ++i) index[s[i].vertices] = i;
    const std::size_t words = (s.size() + 63) / 64;
    std::vector<Bits> cols(s.size(), Bits(words, 0));
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j].dim() == 0) continue;
        for (std::size_t drop = 0; drop < s[j].vertices.size(); ++drop) {
            auto face = s[j].vertices;
            face.erase(face.begin() + static_cast<long>(drop));
            flip(cols[j], index.at(face));
        }
    }
    return cols;
}

/// Textbook left-to-right column reduction, no clearing.
inline nnph::PersistenceDiagram textbook_persistence(std::vector<Simplex> s, std::size_t max_degree) {
    oracle_sort(s);
    auto cols = dense_boundary(s);
    std::vector<long> low_owner(s.size(), -1);
    std::vector<bool> is_birth_paired(s.size(), false);
    nnph::PersistenceDiagram d(max_degree);
    for (std::size_t j = 0; j < cols.size(); ++j) {
        long low = lowest(cols[j]);
        while (low >= 0 && low_owner[static_cast<std::size_t>(low)] >= 0) {
            xor_into(cols[j], cols[static_cast<std::size_t>(low_owner[static_cast<std::size_t>(low)])]);
            low = lowest(cols[j]);
        }
        if (low >= 0) {
            low_owner[static_cast<std::size_t>(low)] = static_cast<long>(j);
            is_birth_paired[static_cast<std::size_t>(low)] = true;
        }
    }
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const long low = lowest(cols[j]);
        if (low >= 0) {
            const auto& b = s[static_cast<std::size_t>(low)];
            if (static_cast<std::size_t>(b.dim()) <= max_degree && s[j].filtration > b.filtration)
                d.degrees[static_cast<std::size_t>(b.dim())].push_back({b.filtration, s[j].filtration});
        } else if (!is_birth_paired[j] && static_cast<std::size_t>(s[j].dim()) <= max_degree) {
            d.degrees[static_cast<std::size_t>(s[j].dim())].push_back({s[j].filtration, nnph::kInfinity});
        }
    }
    d.canonicalize();
    return d;
}

/// Rank over Z2 of a set of dense vectors by Gaussian elimination.
inline std::size_t rank_z2(std::vector<Bits> rows) {
    std::size_t rank = 0;
    if (rows.empty()) return 0;
    const std::size_t bits = rows[0].size() * 64;
    for (std::size_t col = 0; col < bits && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && !test(rows[pivot], col)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && test(rows[r], col)) xor_into(rows[r], rows[rank]);
        ++rank;
    }
    return rank;
}

/// beta_k = dim C_k - rank d_k - rank d_{k+1}.
inline std::size_t brute_betti(const std::vector<Simplex>& s, int degree) {
    const auto cols = dense_boundary(s);
    std::vector<Bits> dk, dk1;
    std::size_t chains = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (s[j].dim() == degree) {
            ++chains;
            if (degree > 0) dk.push_back(cols[j]);
        }
        if (s[j].dim() == degree + 1) dk1.push_back(cols[j]);
    }
    return chains - rank_z2(dk) - rank_z2(dk1);
}

/// Diagonal-augmented matching by exhaustive search over partial injections
/// d1 -> d2; unmatched points go to the diagonal. combine(acc, cost) folds costs.
inline double exhaustive_matching(const std::vector<nnph::Interval>& d1, const std::vector<nnph::Interval>& d2,
                                  const std::function<double(double, double)>& combine) {
    auto inf_norm = [](const nnph::Interval& a, const nnph::Interval& b) {
        return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
    };
    auto diag = [](const nnph::Interval& a) { return (a.death - a.birth) / 2.0; };
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> taken(d2.size(), false);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double acc) {
        if (i == d1.size()) {
            for (std::size_t j = 0; j < d2.size(); ++j)
                if (!taken[j]) acc = combine(acc, diag(d2[j]));
            best = std::min(best, acc);
            return;
        }
        rec(i + 1, combine(acc, diag(d1[i])));
        for (std::size_t j = 0; j < d2.size(); ++j) {
            if (taken[j]) continue;
            taken[j] = true;
            rec(i + 1, combine(acc, inf_norm(d1[i], d2[j])));
            taken[j] = false;
        }
    };
    rec(0, 0.0);
    return best;
}

inline double brute_wasserstein(const std::vector<nnph::Interval>& d1, const std::vector<nnph::Interval>& d2,
                                double p) {
    const double s = exhaustive_matching(d1, d2, [p](double acc, double c) { return acc + std::pow(c, p); });
    return std::pow(s, 1.0 / p);
}

inline double brute_bottleneck(const std::vector<nnph::Interval>& d1, const std::vector<nnph::Interval>& d2) {
    return exhaustive_matching(d1, d2, [](double acc, double c) { return std::max(acc, c); });
}

/// k-th largest tent value at t by sorting all of them.
inline double naive_landscape(const std::vector<nnph::Interval>& d, std::size_t k, double t) {
    std::vector<double> v;
    for (const auto& iv : d) v.push_back(std::max(std::min(t - iv.birth, iv.death - t), 0.0));
    std::sort(v.begin(), v.end(), std::greater<>());
    return k < v.size() ? v[k] : 0.0;
}

// --- random inputs -------------------------------------------------------

/// Random loop-free digraph. With `quantized`, weights come from {0.1, ..., 1.0}
/// so that filtration ties are common.
inline nnph::WeightedDigraph random_digraph(std::mt19937_64& rng, std::size_t n, double density, bool quantized) {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> tenth(1, 10);
    std::vector<nnph::Edge> edges;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) {
            if (a == b || u01(rng) >= density) continue;
            const double w = quantized ? tenth(rng) / 10.0 : std::max(u01(rng), 1e-3);
            edges.push_back({a, b, w});
        }
    return nnph::WeightedDigraph(n, std::move(edges));
}

/// Random finite diagram with up to max_points points inside [0, 1].
inline std::vector<nnph::Interval> random_diagram(std::mt19937_64& rng, std::size_t max_points) {
    std::uniform_int_distribution<std::size_t> count(0, max_points);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<nnph::Interval> d(count(rng));
    for (auto& iv : d) {
        const double a = u01(rng), b = u01(rng);
        iv = {std::min(a, b), std::max(a, b)};
    }
    return d;
}

/// Random MLP with the given widths, weights and biases in [-1, 1].
inline nnph::MlpWeights random_mlp(std::mt19937_64& rng, const std::vector<std::size_t>& widths, bool biases = true) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    nnph::MlpWeights mlp;
    for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
        nnph::DenseLayer layer;
        layer.weights = nnph::Matrix(widths[k + 1], widths[k]);
        for (auto& w : layer.weights.data) w = u(rng);
        if (biases) {
            layer.bias.resize(widths[k + 1]);
            for (auto& b : layer.bias) b = u(rng);
        }
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

/// A uniformly random permutation per neuron layer that is not the identity
/// overall (as long as some layer has width > 1).
inline std::vector<std::vector<std::uint32_t>> random_layer_perms(std::mt19937_64& rng,
                                                                  const std::vector<std::size_t>& widths) {
    std::vector<std::vector<std::uint32_t>> perms;
    bool moved = false;
    for (auto w : widths) {
        std::vector<std::uint32_t> p(w);
        for (std::uint32_t i = 0; i < w; ++i) p[i] = i;
        std::shuffle(p.begin(), p.end(), rng);
        for (std::uint32_t i = 0; i < w; ++i) moved |= p[i] != i;
        perms.push_back(std::move(p));
    }
    if (!moved)
        for (auto& p : perms)
            if (p.size() > 1) {
                std::swap(p[0], p[1]);
                break;
            }
    return perms;
}

}  // namespace oracle
