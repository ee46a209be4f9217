#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nnph/graph.hpp"

namespace nnph {

inline constexpr std::size_t kMaxSimplexDim = 4;

/// Ordered clique (v0, ..., v_dim) of a digraph with its filtration value.
struct FilteredSimplex {
    std::array<VertexId, kMaxSimplexDim + 1> vertices{};
    std::uint8_t dim = 0;
    double filtration = 0.0;

    std::span<const VertexId> verts() const { return {vertices.data(), std::size_t{dim} + 1}; }

    friend bool operator==(const FilteredSimplex&, const FilteredSimplex&) = default;
};

/// Canonical order: filtration, then dimension, then lexicographic vertices.
bool filtration_less(const FilteredSimplex& a, const FilteredSimplex& b);

enum class FiltrationDirection {
    Sublevel,    // a simplex enters at the max of its edge weights
    Superlevel,  // edge weights are flipped to 1 - w, then the sublevel rule applies
};

struct FlagComplexOptions {
    std::size_t max_dim = kMaxSimplexDim;
    FiltrationDirection direction = FiltrationDirection::Sublevel;
    unsigned threads = 1;
};

/// Directed flag complex in canonical filtration order.
class FilteredComplex {
public:
    FilteredComplex() = default;
    FilteredComplex(std::vector<FilteredSimplex> simplices, std::size_t max_dim, bool sort = true);

    std::span<const FilteredSimplex> simplices() const { return simplices_; }
    std::size_t size() const { return simplices_.size(); }
    const FilteredSimplex& operator[](std::size_t i) const { return simplices_[i]; }

    /// Dimension the enumeration was asked to reach (may exceed the largest simplex present).
    std::size_t max_dim() const { return max_dim_; }
    std::size_t count(std::size_t dim) const;

    /// True if the stored order is the canonical filtration order.
    bool is_sorted() const;

private:
    std::vector<FilteredSimplex> simplices_;
    std::size_t max_dim_ = 0;
};

/// All ordered (k+1)-cliques for k <= max_dim. Vertices enter at 0.
FilteredComplex enumerate_simplices(const WeightedDigraph& g, const FlagComplexOptions& options = {});

/// 0 for a vertex, else the max weight over the simplex's edges.
/// Throws InputError if the tuple is not an ordered clique of g.
double filtration_value(std::span<const VertexId> simplex, const WeightedDigraph& g);

}  // namespace nnph
