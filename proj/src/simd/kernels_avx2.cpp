// Compiled with -mavx2 -mfma; only reached through avx2_kernels() after a
// runtime CPU check.
#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "nnph/simd/kernels.hpp"

namespace nnph::simd {
namespace avx2 {
namespace {

inline __m256d tent4(__m256d b, __m256d d, __m256d t) {
    const __m256d rise = _mm256_sub_pd(t, b);
    const __m256d fall = _mm256_sub_pd(d, t);
    return _mm256_max_pd(_mm256_min_pd(rise, fall), _mm256_setzero_pd());
}

inline double tent1(double birth, double death, double t) {
    return std::max(std::min(t - birth, death - t), 0.0);
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void tent_insert(double birth, double death, std::span<const double> t, std::span<double> layers) {
    const std::size_t n = t.size();
    const std::size_t k_layers = n == 0 ? 0 : layers.size() / n;
    const __m256d vb = _mm256_set1_pd(birth);
    const __m256d vd = _mm256_set1_pd(death);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = tent4(vb, vd, _mm256_loadu_pd(t.data() + i));
        for (std::size_t k = 0; k < k_layers; ++k) {
            double* slot = layers.data() + k * n + i;
            const __m256d cur = _mm256_loadu_pd(slot);
            _mm256_storeu_pd(slot, _mm256_max_pd(cur, v));
            v = _mm256_min_pd(cur, v);
        }
    }
    for (; i < n; ++i) {
        double v = tent1(birth, death, t[i]);
        for (std::size_t k = 0; k < k_layers; ++k) {
            double& slot = layers[k * n + i];
            const double hi = std::max(slot, v);
            v = std::min(slot, v);
            slot = hi;
        }
    }
}

void tent_accumulate(double birth, double death, double weight, std::span<const double> t, std::span<double> out) {
    const std::size_t n = t.size();
    const __m256d vb = _mm256_set1_pd(birth);
    const __m256d vd = _mm256_set1_pd(death);
    const __m256d vw = _mm256_set1_pd(weight);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d tent = tent4(vb, vd, _mm256_loadu_pd(t.data() + i));
        const __m256d acc = _mm256_loadu_pd(out.data() + i);
        _mm256_storeu_pd(out.data() + i, _mm256_add_pd(acc, _mm256_mul_pd(vw, tent)));
    }
    for (; i < n; ++i) out[i] += weight * tent1(birth, death, t[i]);
}

void antisym_update(double coef, std::span<const double> a, std::span<const double> b, std::span<double> img) {
    const std::size_t n = a.size();
    const __m256d vc = _mm256_set1_pd(coef);
    for (std::size_t i = 0; i < n; ++i) {
        const double ai = a[i], bi = b[i];
        const __m256d vai = _mm256_set1_pd(ai);
        const __m256d vbi = _mm256_set1_pd(bi);
        double* row = img.data() + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d bj = _mm256_loadu_pd(b.data() + j);
            const __m256d aj = _mm256_loadu_pd(a.data() + j);
            const __m256d cross = _mm256_sub_pd(_mm256_mul_pd(vai, bj), _mm256_mul_pd(vbi, aj));
            _mm256_storeu_pd(row + j, _mm256_add_pd(_mm256_loadu_pd(row + j), _mm256_mul_pd(vc, cross)));
        }
        for (; j < n; ++j) row[j] += coef * (ai * b[j] - bi * a[j]);
    }
}

double weighted_sq_diff_sum(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), _mm256_mul_pd(d0, d0), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i + 4), _mm256_mul_pd(d1, d1), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), _mm256_mul_pd(d0, d0), acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += w[i] * (d * d);
    }
    return s;
}

double weighted_abs_diff_sum(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    const std::size_t n = a.size();
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w.data() + i), _mm256_andnot_pd(sign_mask, d), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += w[i] * std::abs(a[i] - b[i]);
    return s;
}

}  // namespace

const KernelTable& table() {
    static const KernelTable t{"avx2",         tent_insert,          tent_accumulate,
                               antisym_update, weighted_sq_diff_sum, weighted_abs_diff_sum};
    return t;
}

}  // namespace avx2
}  // namespace nnph::simd
