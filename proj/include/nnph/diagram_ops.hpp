#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nnph/persistence.hpp"

namespace nnph {

inline constexpr double kDefaultEta = 0.01;
inline constexpr double kDefaultInfinityCap = 1.0;
inline constexpr std::size_t kMaxExactMatchingPoints = 2000;

/// Diagram whose intervals are all finite.
struct CleanDiagram {
    std::vector<std::vector<Interval>> degrees;

    std::size_t max_degree() const { return degrees.empty() ? 0 : degrees.size() - 1; }
    std::span<const Interval> degree(std::size_t d) const {
        return d < degrees.size() ? std::span<const Interval>(degrees[d]) : std::span<const Interval>{};
    }
};

/// Drops intervals with death - birth < eta. Essential intervals stay.
PersistenceDiagram filter_diagram(const PersistenceDiagram& d, double eta = kDefaultEta);

/// Replaces +inf deaths by cap. Throws InputError if a finite death exceeds cap.
CleanDiagram cap_infinity(const PersistenceDiagram& d, double cap = kDefaultInfinityCap);

/// Sup-norm distance between two diagram points.
double point_distance(const Interval& a, const Interval& b);
/// Sup-norm distance from a point to the diagonal.
double diagonal_distance(const Interval& a);

/// Exact p-Wasserstein distance with diagonal augmentation (Hungarian
/// algorithm). Single-degree slices of at most kMaxExactMatchingPoints each.
double wasserstein(std::span<const Interval> d1, std::span<const Interval> d2, double p = 1.0);

/// Exact bottleneck distance with diagonal augmentation.
double bottleneck(std::span<const Interval> d1, std::span<const Interval> d2);

}  // namespace nnph
