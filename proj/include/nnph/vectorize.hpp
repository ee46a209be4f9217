#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nnph/persistence.hpp"

namespace nnph {

inline constexpr std::size_t kDefaultResolution = 100;
inline constexpr std::size_t kDefaultLandscapeLayers = 10;
inline constexpr double kDefaultSilhouettePower = 1.0;
inline constexpr double kDefaultHeatSigma = 0.1;

/// Uniform sampling of [t_min, t_max] with `resolution` points, both ends included.
struct Grid {
    double t_min = 0.0;
    double t_max = 1.0;
    std::size_t resolution = kDefaultResolution;

    void validate() const;
    double step() const { return (t_max - t_min) / static_cast<double>(resolution - 1); }
    std::vector<double> samples() const;
    /// Trapezoidal quadrature weights for the samples.
    std::vector<double> trapezoid_weights() const;

    friend bool operator==(const Grid&, const Grid&) = default;
};

struct LandscapeVec {
    Grid grid;
    std::size_t k_layers = 0;
    std::vector<double> values;  // k_layers rows of grid.resolution samples

    std::span<const double> layer(std::size_t k) const {
        return {values.data() + k * grid.resolution, grid.resolution};
    }
};

struct SilhouetteVec {
    Grid grid;
    double power = kDefaultSilhouettePower;
    std::vector<double> values;
};

/// values[i * resolution + j] = u(x1 = t_i, x2 = t_j), x1 on the birth axis.
struct HeatImage {
    Grid grid;
    double sigma = kDefaultHeatSigma;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[i * grid.resolution + j]; }
};

LandscapeVec landscape(std::span<const Interval> diagram, std::size_t k_layers, const Grid& grid);

/// (sum_k ||lambda_k||_p^p)^(1/p), trapezoidal quadrature.
double landscape_norm(const LandscapeVec& v, double p);

/// (sum_k integral |lambda_k - mu_k|^2)^(1/2). Throws InputError on grid or layer mismatch.
double landscape_distance(const LandscapeVec& a, const LandscapeVec& b);

/// Power-weighted silhouette, weights |death - birth|^power. Empty diagram gives zero.
SilhouetteVec silhouette(std::span<const Interval> diagram, double power, const Grid& grid);

/// Heat vectorization: Gaussians of variance sigma^2 at each point minus
/// their mirror images across the diagonal.
HeatImage heat(std::span<const Interval> diagram, double sigma, const Grid& grid);

}  // namespace nnph
