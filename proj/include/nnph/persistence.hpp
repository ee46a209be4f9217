#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "nnph/flag_complex.hpp"

namespace nnph {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultMaxDegree = 3;

struct Interval {
    double birth = 0.0;
    double death = kInfinity;

    double lifespan() const { return death - birth; }
    bool is_essential() const { return death == kInfinity; }

    friend bool operator==(const Interval&, const Interval&) = default;
    friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Intervals per homology degree, degrees 0..max_degree.
struct PersistenceDiagram {
    std::vector<std::vector<Interval>> degrees;

    PersistenceDiagram() = default;
    explicit PersistenceDiagram(std::size_t max_degree) : degrees(max_degree + 1) {}

    std::size_t max_degree() const { return degrees.empty() ? 0 : degrees.size() - 1; }
    std::size_t size() const;
    /// Sorts every degree so diagrams compare as multisets.
    void canonicalize();

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Sparse Z2 boundary matrix: column j lists the row indices of the facets of
/// simplex j, ascending. Rows and columns share the complex's filtration order.
class BoundaryMatrix {
public:
    using Index = std::uint32_t;

    explicit BoundaryMatrix(const FilteredComplex& complex);

    std::size_t size() const { return columns_.size(); }
    std::span<const Index> column(std::size_t j) const { return columns_[j]; }
    std::uint8_t dim(std::size_t j) const { return dims_[j]; }

    /// Verifies that the boundary of every boundary is zero. Exhaustive when
    /// `sample_stride` is 1, otherwise checks every sample_stride-th column.
    bool boundary_squares_to_zero(std::size_t sample_stride = 1) const;

private:
    std::vector<std::vector<Index>> columns_;
    std::vector<std::uint8_t> dims_;
};

/// Standard persistence pairing with clearing. Needs simplices up to
/// dimension max_degree + 1 for degree max_degree to be complete.
/// Zero-length intervals are dropped. Throws InputError if the complex is not
/// in canonical filtration order.
PersistenceDiagram compute_persistence(const FilteredComplex& complex, std::size_t max_degree = kDefaultMaxDegree);

/// Betti number of the full complex (filtration ignored) from Z2 ranks.
/// Throws InputError if degree + 1 exceeds the complex's max_dim.
std::size_t betti_numbers(const FilteredComplex& complex, std::size_t degree);

}  // namespace nnph
