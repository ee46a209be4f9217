#include <algorithm>
#include <cmath>

#include "nnph/simd/kernels.hpp"

namespace nnph::simd {
namespace {

inline double tent(double birth, double death, double t) { return std::max(std::min(t - birth, death - t), 0.0); }

void tent_insert(double birth, double death, std::span<const double> t, std::span<double> layers) {
    const std::size_t n = t.size();
    const std::size_t k_layers = n == 0 ? 0 : layers.size() / n;
    for (std::size_t i = 0; i < n; ++i) {
        double v = tent(birth, death, t[i]);
        for (std::size_t k = 0; k < k_layers; ++k) {
            double& slot = layers[k * n + i];
            const double hi = std::max(slot, v);
            v = std::min(slot, v);
            slot = hi;
        }
    }
}

void tent_accumulate(double birth, double death, double weight, std::span<const double> t, std::span<double> out) {
    for (std::size_t i = 0; i < t.size(); ++i) out[i] += weight * tent(birth, death, t[i]);
}

void antisym_update(double coef, std::span<const double> a, std::span<const double> b, std::span<double> img) {
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i], bi = b[i];
        double* row = img.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) row[j] += coef * (ai * b[j] - bi * a[j]);
    }
}

double weighted_sq_diff_sum(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += w[i] * (d * d);
    }
    return s;
}

double weighted_abs_diff_sum(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{"scalar",           tent_insert,          tent_accumulate,
                                   antisym_update,     weighted_sq_diff_sum, weighted_abs_diff_sum};
    return table;
}

}  // namespace nnph::simd
