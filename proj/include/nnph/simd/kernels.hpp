#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Inner loops of the vectorizations and distances. Every kernel has a scalar
// reference and may have SIMD variants; the active table is chosen once at
// startup from the CPU features (override with NNPH_SIMD=scalar|avx2).
//
// Element-wise kernels (tent_insert, tent_accumulate, antisym_update) are
// written without fused multiply-add so that every variant is bit-identical
// to the scalar reference. Reductions differ only in summation order.

namespace nnph::simd {

struct KernelTable {
    std::string_view name;

    // Pushes the tent max(min(t - birth, death - t), 0) into the per-sample
    // descending top-k stack `layers` (row-major, k rows of t.size()).
    void (*tent_insert)(double birth, double death, std::span<const double> t, std::span<double> layers);

    // out[i] += weight * tent(t[i]).
    void (*tent_accumulate)(double birth, double death, double weight, std::span<const double> t,
                            std::span<double> out);

    // img[i][j] += coef * (a[i] * b[j] - b[i] * a[j]) for an n x n image.
    void (*antisym_update)(double coef, std::span<const double> a, std::span<const double> b,
                           std::span<double> img);

    // sum_i w[i] * (a[i] - b[i])^2
    double (*weighted_sq_diff_sum)(std::span<const double> a, std::span<const double> b,
                                   std::span<const double> w);

    // sum_i w[i] * |a[i] - b[i]|
    double (*weighted_abs_diff_sum)(std::span<const double> a, std::span<const double> b,
                                    std::span<const double> w);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when not compiled in or not supported by this CPU.
const KernelTable* avx2_kernels();

/// Table used by the library.
const KernelTable& active_kernels();

}  // namespace nnph::simd
