#include "nnph/vectorize.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nnph/error.hpp"
#include "nnph/simd/kernels.hpp"

namespace nnph {

void Grid::validate() const {
    if (!(t_min < t_max) || !std::isfinite(t_min) || !std::isfinite(t_max))
        throw InputError("grid needs finite t_min < t_max");
    if (resolution < 2) throw InputError("grid resolution must be at least 2");
}

std::vector<double> Grid::samples() const {
    std::vector<double> t(resolution);
    const double h = step();
    for (std::size_t i = 0; i < resolution; ++i) t[i] = t_min + h * static_cast<double>(i);
    t.back() = t_max;
    return t;
}

std::vector<double> Grid::trapezoid_weights() const {
    std::vector<double> w(resolution, step());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

LandscapeVec landscape(std::span<const Interval> diagram, std::size_t k_layers, const Grid& grid) {
    grid.validate();
    if (k_layers < 1) throw InputError("landscape needs at least one layer");
    LandscapeVec out{grid, k_layers, std::vector<double>(k_layers * grid.resolution, 0.0)};
    const auto t = grid.samples();
    const auto& kernels = simd::active_kernels();
    for (const auto& iv : diagram) kernels.tent_insert(iv.birth, iv.death, t, out.values);
    return out;
}

double landscape_norm(const LandscapeVec& v, double p) {
    if (!(p >= 1.0)) throw InputError("landscape norm order must be >= 1");
    const auto w = v.grid.trapezoid_weights();
    double total = 0.0;
    if (p == 1.0) {
        const std::vector<double> zero(v.grid.resolution, 0.0);
        for (std::size_t k = 0; k < v.k_layers; ++k)
            total += simd::active_kernels().weighted_abs_diff_sum(v.layer(k), zero, w);
        return total;
    }
    for (std::size_t k = 0; k < v.k_layers; ++k) {
        const auto layer = v.layer(k);
        for (std::size_t i = 0; i < layer.size(); ++i) total += w[i] * std::pow(std::abs(layer[i]), p);
    }
    return std::pow(total, 1.0 / p);
}

double landscape_distance(const LandscapeVec& a, const LandscapeVec& b) {
    if (!(a.grid == b.grid)) throw InputError("landscapes sampled on different grids");
    if (a.k_layers != b.k_layers) throw InputError("landscapes have different layer counts");
    const auto w = a.grid.trapezoid_weights();
    double total = 0.0;
    for (std::size_t k = 0; k < a.k_layers; ++k)
        total += simd::active_kernels().weighted_sq_diff_sum(a.layer(k), b.layer(k), w);
    return std::sqrt(total);
}

SilhouetteVec silhouette(std::span<const Interval> diagram, double power, const Grid& grid) {
    grid.validate();
    if (!(power > 0.0) || !std::isfinite(power)) throw InputError("silhouette power must be positive and finite");
    SilhouetteVec out{grid, power, std::vector<double>(grid.resolution, 0.0)};
    const auto t = grid.samples();
    const auto& kernels = simd::active_kernels();
    double weight_sum = 0.0;
    for (const auto& iv : diagram) {
        const double w = std::pow(std::abs(iv.death - iv.birth), power);
        kernels.tent_accumulate(iv.birth, iv.death, w, t, out.values);
        weight_sum += w;
    }
    if (weight_sum > 0.0)
        for (auto& v : out.values) v /= weight_sum;
    return out;
}

HeatImage heat(std::span<const Interval> diagram, double sigma, const Grid& grid) {
    grid.validate();
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InputError("heat sigma must be positive and finite");
    const std::size_t n = grid.resolution;
    HeatImage out{grid, sigma, std::vector<double>(n * n, 0.0)};

    const double time = sigma * sigma / 2.0;
    const double coef = 1.0 / (4.0 * std::numbers::pi * time);
    const auto t = grid.samples();
    const auto& kernels = simd::active_kernels();
    std::vector<double> at_birth(n), at_death(n);
    for (const auto& iv : diagram) {
        // The kernel is separable: G(x - p) = coef * g(x1 - b) * g(x2 - d).
        for (std::size_t i = 0; i < n; ++i) {
            const double db = t[i] - iv.birth;
            const double dd = t[i] - iv.death;
            at_birth[i] = std::exp(-(db * db) / (4.0 * time));
            at_death[i] = std::exp(-(dd * dd) / (4.0 * time));
        }
        kernels.antisym_update(coef, at_birth, at_death, out.values);
    }
    return out;
}

}  // namespace nnph
