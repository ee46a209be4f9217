#include "nnph/distances.hpp"

#include <cmath>
#include <mutex>
#include <thread>

#include "nnph/error.hpp"
#include "nnph/simd/kernels.hpp"

namespace nnph {

std::string_view to_string(VectorKind kind) {
    switch (kind) {
        case VectorKind::Landscape: return "landscape";
        case VectorKind::Silhouette: return "silhouette";
        case VectorKind::Heat: return "heat";
    }
    return "?";
}

std::string_view to_string(Measure measure) {
    switch (measure) {
        case Measure::Heat: return "heat";
        case Measure::Silhouette: return "silhouette";
        case Measure::Landscape: return "landscape";
        case Measure::Norm1: return "norm1";
        case Measure::Frobenius: return "frobenius";
    }
    return "?";
}

std::optional<Measure> parse_measure(std::string_view name) {
    for (auto m : {Measure::Heat, Measure::Silhouette, Measure::Landscape, Measure::Norm1, Measure::Frobenius})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

bool is_baseline(Measure measure) { return measure == Measure::Norm1 || measure == Measure::Frobenius; }

VectorKind vector_kind(Measure measure) {
    switch (measure) {
        case Measure::Heat: return VectorKind::Heat;
        case Measure::Silhouette: return VectorKind::Silhouette;
        case Measure::Landscape: return VectorKind::Landscape;
        default: throw InputError(std::string(to_string(measure)) + " is not a vectorization measure");
    }
}

PersistenceVectorization vectorize(const CleanDiagram& diagram, const VectorParams& params) {
    PersistenceVectorization out{params, {}};
    out.degrees.reserve(diagram.degrees.size());
    for (std::size_t d = 0; d < diagram.degrees.size(); ++d) {
        const auto slice = diagram.degree(d);
        switch (params.kind) {
            case VectorKind::Landscape:
                out.degrees.push_back(landscape(slice, params.landscape_layers, params.grid).values);
                break;
            case VectorKind::Silhouette:
                out.degrees.push_back(silhouette(slice, params.silhouette_power, params.grid).values);
                break;
            case VectorKind::Heat:
                out.degrees.push_back(heat(slice, params.sigma, params.grid).values);
                break;
        }
    }
    return out;
}

namespace {

// Quadrature weights matching the flattened layout of a vectorization.
std::vector<double> layout_weights(const VectorParams& params) {
    const auto w1 = params.grid.trapezoid_weights();
    const std::size_t n = w1.size();
    switch (params.kind) {
        case VectorKind::Silhouette: return w1;
        case VectorKind::Landscape: {
            std::vector<double> w;
            w.reserve(params.landscape_layers * n);
            for (std::size_t k = 0; k < params.landscape_layers; ++k) w.insert(w.end(), w1.begin(), w1.end());
            return w;
        }
        case VectorKind::Heat: {
            std::vector<double> w(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) w[i * n + j] = w1[i] * w1[j];
            return w;
        }
    }
    return w1;
}

double lp_distance(std::span<const double> a, std::span<const double> b, std::span<const double> w, double p) {
    const auto& kernels = simd::active_kernels();
    if (p == 2.0) return std::sqrt(kernels.weighted_sq_diff_sum(a, b, w));
    if (p == 1.0) return kernels.weighted_abs_diff_sum(a, b, w);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * std::pow(std::abs(a[i] - b[i]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace

double vector_distance(const PersistenceVectorization& a, const PersistenceVectorization& b, double p,
                       std::span<const double> degree_weights) {
    if (!(a.params == b.params)) throw InputError("vectorizations use different parameters");
    if (a.degrees.size() != b.degrees.size()) throw InputError("vectorizations cover different degree ranges");
    if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("distance order p must be finite and >= 1");
    if (!degree_weights.empty() && degree_weights.size() < a.degrees.size())
        throw InputError("degree weight vector is shorter than the number of degrees");

    const auto w = layout_weights(a.params);
    double total = 0.0;
    for (std::size_t d = 0; d < a.degrees.size(); ++d) {
        const double weight = degree_weights.empty() ? 1.0 : degree_weights[d];
        if (weight == 0.0) continue;
        if (a.degrees[d].size() != w.size() || b.degrees[d].size() != w.size())
            throw InputError("vectorization storage does not match its grid");
        double dist;
        if (a.params.kind == VectorKind::Landscape && p == 2.0) {
            const LandscapeVec la{a.params.grid, a.params.landscape_layers, a.degrees[d]};
            const LandscapeVec lb{b.params.grid, b.params.landscape_layers, b.degrees[d]};
            dist = landscape_distance(la, lb);
        } else {
            dist = lp_distance(a.degrees[d], b.degrees[d], w, p);
        }
        total += weight * dist;
    }
    return total;
}

double baseline_norm_distance(const Matrix& a, const Matrix& b, Measure kind) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw InputError("baseline norms need equal shapes, got " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols) + " and " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    const std::vector<double> ones(a.data.size(), 1.0);
    const auto& kernels = simd::active_kernels();
    switch (kind) {
        case Measure::Norm1: return kernels.weighted_abs_diff_sum(a.data, b.data, ones);
        case Measure::Frobenius: return std::sqrt(kernels.weighted_sq_diff_sum(a.data, b.data, ones));
        default: throw InputError("baseline measure must be norm1 or frobenius");
    }
}

namespace {

using PairDistance = std::function<double(std::size_t i, std::size_t a, std::size_t j, std::size_t b)>;

DistanceMatrix assemble(const std::vector<std::string>& labels, const std::vector<std::size_t>& run_counts,
                        Measure measure, unsigned threads, const PairDistance& dist) {
    const std::size_t n = run_counts.size();
    if (labels.size() != n) throw InputError("label count does not match experiment count");
    for (std::size_t i = 0; i < n; ++i)
        if (run_counts[i] == 0) throw InputError("experiment '" + labels[i] + "' has no runs");

    DistanceMatrix out{labels, measure, Matrix(n, n), Matrix(n, n)};
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) cells.emplace_back(i, j);

    // Each cell's pair list is reduced in a fixed order, so the result does
    // not depend on the thread count.
    auto fill = [&](std::size_t c) {
        const auto [i, j] = cells[c];
        std::vector<double> values;
        for (std::size_t a = 0; a < run_counts[i]; ++a)
            for (std::size_t b = 0; b < run_counts[j]; ++b) {
                if (i == j && a == b) continue;
                values.push_back(dist(i, a, j, b));
            }
        double mean = 0.0, var = 0.0;
        if (!values.empty()) {
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            for (double v : values) var += (v - mean) * (v - mean);
            var /= static_cast<double>(values.size());
        }
        out.mean(i, j) = out.mean(j, i) = mean;
        out.std(i, j) = out.std(j, i) = std::sqrt(var);
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    if (workers == 1) {
        for (std::size_t c = 0; c < cells.size(); ++c) fill(c);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t c = w; c < cells.size(); c += workers) fill(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }
    return out;
}

}  // namespace

DistanceMatrix assemble_matrix(const std::vector<std::string>& labels,
                               const std::vector<std::vector<PersistenceVectorization>>& runs, Measure measure,
                               const AssembleOptions& options) {
    const auto kind = vector_kind(measure);
    const VectorParams* reference = nullptr;
    std::vector<std::size_t> counts;
    for (const auto& exp : runs) {
        counts.push_back(exp.size());
        for (const auto& v : exp) {
            if (v.params.kind != kind) throw InputError("vectorization kind does not match the measure");
            if (!reference) reference = &v.params;
            if (!(v.params == *reference)) throw InputError("runs use different vectorization parameters");
        }
    }
    return assemble(labels, counts, measure, options.threads,
                    [&](std::size_t i, std::size_t a, std::size_t j, std::size_t b) {
                        return vector_distance(runs[i][a], runs[j][b], options.p, options.degree_weights);
                    });
}

DistanceMatrix assemble_baseline_matrix(const std::vector<std::string>& labels,
                                        const std::vector<std::vector<Matrix>>& runs, Measure measure,
                                        unsigned threads) {
    if (!is_baseline(measure)) throw InputError("baseline matrix needs norm1 or frobenius");
    std::vector<std::size_t> counts;
    for (const auto& exp : runs) counts.push_back(exp.size());
    return assemble(labels, counts, measure, threads,
                    [&](std::size_t i, std::size_t a, std::size_t j, std::size_t b) {
                        return baseline_norm_distance(runs[i][a], runs[j][b], measure);
                    });
}

}  // namespace nnph
