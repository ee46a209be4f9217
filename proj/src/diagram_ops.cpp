#include "nnph/diagram_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "nnph/error.hpp"

namespace nnph {

PersistenceDiagram filter_diagram(const PersistenceDiagram& d, double eta) {
    if (!(eta >= 0.0)) throw InputError("eta must be non-negative");
    PersistenceDiagram out(d.max_degree());
    out.degrees.resize(d.degrees.size());
    for (std::size_t k = 0; k < d.degrees.size(); ++k)
        for (const auto& iv : d.degrees[k])
            if (iv.is_essential() || iv.lifespan() >= eta) out.degrees[k].push_back(iv);
    return out;
}

CleanDiagram cap_infinity(const PersistenceDiagram& d, double cap) {
    CleanDiagram out;
    out.degrees.resize(d.degrees.size());
    for (std::size_t k = 0; k < d.degrees.size(); ++k) {
        out.degrees[k].reserve(d.degrees[k].size());
        for (const auto& iv : d.degrees[k]) {
            if (iv.is_essential()) {
                out.degrees[k].push_back({iv.birth, cap});
                continue;
            }
            if (iv.death > cap)
                throw InputError("finite death " + std::to_string(iv.death) + " exceeds the infinity cap " +
                                 std::to_string(cap));
            out.degrees[k].push_back(iv);
        }
    }
    return out;
}

double point_distance(const Interval& a, const Interval& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

double diagonal_distance(const Interval& a) { return std::abs(a.death - a.birth) / 2.0; }

namespace {

void check_matching_input(std::span<const Interval> d1, std::span<const Interval> d2) {
    if (d1.size() > kMaxExactMatchingPoints || d2.size() > kMaxExactMatchingPoints)
        throw InputError("exact matching is limited to " + std::to_string(kMaxExactMatchingPoints) +
                         " points per diagram");
    auto finite = [](const Interval& iv) { return std::isfinite(iv.birth) && std::isfinite(iv.death); };
    if (!std::all_of(d1.begin(), d1.end(), finite) || !std::all_of(d2.begin(), d2.end(), finite))
        throw InputError("exact matching needs finite diagrams; cap infinities first");
}

// Augmented (n + m) square cost matrix. Rows: d1 points, then one diagonal
// slot per d2 point. Columns: d2 points, then one diagonal slot per d1 point.
// Diagonal-to-diagonal costs nothing.
template <class CostFn>
std::vector<double> augmented_costs(std::span<const Interval> d1, std::span<const Interval> d2, CostFn cost) {
    const std::size_t n = d1.size(), m = d2.size(), size = n + m;
    std::vector<double> c(size * size, 0.0);
    const double blocked = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            double v = 0.0;
            if (i < n && j < m) {
                v = cost(point_distance(d1[i], d2[j]));
            } else if (i < n) {
                // d1 point to its own diagonal slot only
                v = (j - m == i) ? cost(diagonal_distance(d1[i])) : blocked;
            } else if (j < m) {
                v = (i - n == j) ? cost(diagonal_distance(d2[j])) : blocked;
            }
            c[i * size + j] = v;
        }
    }
    return c;
}

// Minimum-cost perfect assignment on a dense square matrix (shortest
// augmenting paths with potentials, O(n^3)). Infinite entries are forbidden.
double hungarian(const std::vector<double>& cost, std::size_t n) {
    if (n == 0) return 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double c = cost[(i0 - 1) * n + (j - 1)];
                const double cur = c == inf ? inf : c - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if (delta == inf) throw NumericalError("assignment problem has no finite solution");
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    // Sum the original costs of the chosen assignment for an exact total.
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[(match[j] - 1) * n + (j - 1)];
    return total;
}

// Hopcroft-Karp on the augmented bipartite graph restricted to edges with
// cost <= threshold. Returns true if a perfect matching exists.
class ThresholdMatcher {
public:
    ThresholdMatcher(std::span<const Interval> d1, std::span<const Interval> d2) : d1_(d1), d2_(d2) {
        size_ = d1.size() + d2.size();
    }

    bool perfect(double threshold) {
        build(threshold);
        match_l_.assign(size_, kFree);
        match_r_.assign(size_, kFree);
        std::size_t matched = 0;
        while (bfs()) {
            for (std::size_t l = 0; l < size_; ++l)
                if (match_l_[l] == kFree && dfs(l)) ++matched;
        }
        return matched == size_;
    }

private:
    static constexpr std::size_t kFree = std::numeric_limits<std::size_t>::max();

    void build(double t) {
        const std::size_t n = d1_.size(), m = d2_.size();
        adj_.assign(size_, {});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j)
                if (point_distance(d1_[i], d2_[j]) <= t) adj_[i].push_back(j);
            if (diagonal_distance(d1_[i]) <= t) adj_[i].push_back(m + i);
        }
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t l = n + k;
            if (diagonal_distance(d2_[k]) <= t) adj_[l].push_back(k);
            for (std::size_t i = 0; i < n; ++i) adj_[l].push_back(m + i);
        }
    }

    bool bfs() {
        dist_.assign(size_, kFree);
        std::queue<std::size_t> q;
        for (std::size_t l = 0; l < size_; ++l)
            if (match_l_[l] == kFree) {
                dist_[l] = 0;
                q.push(l);
            }
        bool reachable_free = false;
        while (!q.empty()) {
            const auto l = q.front();
            q.pop();
            for (auto r : adj_[l]) {
                const auto next = match_r_[r];
                if (next == kFree) {
                    reachable_free = true;
                } else if (dist_[next] == kFree) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return reachable_free;
    }

    bool dfs(std::size_t l) {
        for (auto r : adj_[l]) {
            const auto next = match_r_[r];
            if (next == kFree || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = kFree;
        return false;
    }

    std::span<const Interval> d1_, d2_;
    std::size_t size_ = 0;
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_, match_r_, dist_;
};

}  // namespace

double wasserstein(std::span<const Interval> d1, std::span<const Interval> d2, double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("Wasserstein order p must be finite and >= 1");
    check_matching_input(d1, d2);
    const std::size_t size = d1.size() + d2.size();
    const auto costs = augmented_costs(d1, d2, [p](double x) { return p == 1.0 ? x : std::pow(x, p); });
    const double total = hungarian(costs, size);
    return p == 1.0 ? total : std::pow(total, 1.0 / p);
}

double bottleneck(std::span<const Interval> d1, std::span<const Interval> d2) {
    check_matching_input(d1, d2);
    if (d1.empty() && d2.empty()) return 0.0;

    // The optimum is one of the candidate edge costs.
    std::vector<double> candidates{0.0};
    for (const auto& a : d1) {
        candidates.push_back(diagonal_distance(a));
        for (const auto& b : d2) candidates.push_back(point_distance(a, b));
    }
    for (const auto& b : d2) candidates.push_back(diagonal_distance(b));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    ThresholdMatcher matcher(d1, d2);
    std::size_t lo = 0, hi = candidates.size() - 1;  // matching all to the diagonal always works at hi
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (matcher.perfect(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

}  // namespace nnph
