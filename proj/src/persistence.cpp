#include "nnph/persistence.hpp"

#include <algorithm>
#include <string>

#include "nnph/error.hpp"

namespace nnph {

std::size_t PersistenceDiagram::size() const {
    std::size_t n = 0;
    for (const auto& d : degrees) n += d.size();
    return n;
}

void PersistenceDiagram::canonicalize() {
    for (auto& d : degrees) std::sort(d.begin(), d.end());
}

namespace {

using Index = BoundaryMatrix::Index;
constexpr Index kNone = std::numeric_limits<Index>::max();

// Maps a vertex tuple of a fixed dimension to its position in the complex.
class FaceIndex {
public:
    explicit FaceIndex(const FilteredComplex& complex) : by_dim_(kMaxSimplexDim + 1) {
        for (std::size_t i = 0; i < complex.size(); ++i) by_dim_[complex[i].dim].push_back(static_cast<Index>(i));
        for (auto& ids : by_dim_) {
            std::sort(ids.begin(), ids.end(), [&](Index a, Index b) {
                const auto va = complex[a].verts();
                const auto vb = complex[b].verts();
                return std::lexicographical_compare(va.begin(), va.end(), vb.begin(), vb.end());
            });
        }
        complex_ = &complex;
    }

    Index find(std::span<const VertexId> face) const {
        const auto& ids = by_dim_[face.size() - 1];
        auto it = std::lower_bound(ids.begin(), ids.end(), face, [&](Index a, std::span<const VertexId> key) {
            const auto va = (*complex_)[a].verts();
            return std::lexicographical_compare(va.begin(), va.end(), key.begin(), key.end());
        });
        if (it == ids.end()) return kNone;
        const auto found = (*complex_)[*it].verts();
        return std::equal(found.begin(), found.end(), face.begin(), face.end()) ? *it : kNone;
    }

private:
    std::vector<std::vector<Index>> by_dim_;
    const FilteredComplex* complex_ = nullptr;
};

// In-place symmetric difference of two ascending index lists (Z2 column add).
void add_column(std::vector<Index>& target, std::span<const Index> source, std::vector<Index>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

// Reduces the columns with the given dimension, left to right. pivot_col maps
// a row to the column whose lowest entry it is. Returns the number of nonzero
// reduced columns (the rank contributed by this dimension).
std::size_t reduce_dimension(std::vector<std::vector<Index>>& columns, std::span<const std::uint8_t> dims,
                             std::uint8_t dim, std::vector<Index>& pivot_col, std::vector<bool>& cleared) {
    std::vector<Index> scratch;
    std::size_t rank = 0;
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (dims[j] != dim) continue;
        auto& col = columns[j];
        if (cleared[j]) {
            col.clear();
            continue;
        }
        while (!col.empty()) {
            const Index low = col.back();
            const Index other = pivot_col[low];
            if (other == kNone) break;
            add_column(col, columns[other], scratch);
        }
        if (!col.empty()) {
            pivot_col[col.back()] = static_cast<Index>(j);
            // The pivot row is a positive simplex; its own column reduces to zero.
            cleared[col.back()] = true;
            ++rank;
        }
    }
    return rank;
}

}  // namespace

BoundaryMatrix::BoundaryMatrix(const FilteredComplex& complex) {
    if (complex.size() >= kNone) throw InputError("complex too large for 32-bit column indices");
    const FaceIndex index(complex);
    columns_.resize(complex.size());
    dims_.resize(complex.size());
    std::array<VertexId, kMaxSimplexDim> face{};
    for (std::size_t j = 0; j < complex.size(); ++j) {
        const auto& s = complex[j];
        dims_[j] = s.dim;
        if (s.dim == 0) continue;
        const auto v = s.verts();
        auto& col = columns_[j];
        col.reserve(v.size());
        for (std::size_t drop = 0; drop < v.size(); ++drop) {
            std::size_t k = 0;
            for (std::size_t i = 0; i < v.size(); ++i)
                if (i != drop) face[k++] = v[i];
            const Index row = index.find({face.data(), k});
            if (row == kNone) throw InputError("complex is not closed under faces");
            if (row >= j) throw InputError("face appears after its coface; complex is not in filtration order");
            col.push_back(row);
        }
        std::sort(col.begin(), col.end());
    }
}

bool BoundaryMatrix::boundary_squares_to_zero(std::size_t sample_stride) const {
    sample_stride = std::max<std::size_t>(1, sample_stride);
    std::vector<Index> acc, scratch;
    for (std::size_t j = 0; j < columns_.size(); j += sample_stride) {
        acc.clear();
        for (Index face : columns_[j]) add_column(acc, columns_[face], scratch);
        if (!acc.empty()) return false;
    }
    return true;
}

PersistenceDiagram compute_persistence(const FilteredComplex& complex, std::size_t max_degree) {
    if (max_degree > kMaxSimplexDim - 1)
        throw InputError("max_degree " + std::to_string(max_degree) + " exceeds " +
                         std::to_string(kMaxSimplexDim - 1));
    if (!complex.is_sorted()) throw InputError("complex is not in canonical filtration order");

    BoundaryMatrix boundary(complex);
    std::vector<std::vector<Index>> columns(boundary.size());
    std::vector<std::uint8_t> dims(boundary.size());
    for (std::size_t j = 0; j < boundary.size(); ++j) {
        const auto c = boundary.column(j);
        columns[j].assign(c.begin(), c.end());
        dims[j] = boundary.dim(j);
    }

    std::uint8_t top = 0;
    for (auto d : dims) top = std::max(top, d);
    const auto reduce_top = static_cast<std::uint8_t>(std::min<std::size_t>(top, max_degree + 1));

    std::vector<Index> pivot_col(columns.size(), kNone);
    std::vector<bool> cleared(columns.size(), false);
    // Top-down so that pivots found in dimension d+1 clear columns in dimension d.
    for (int d = reduce_top; d >= 1; --d)
        reduce_dimension(columns, dims, static_cast<std::uint8_t>(d), pivot_col, cleared);

    PersistenceDiagram diagram(max_degree);
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const auto dim = dims[j];
        // Death column: pair (low, j).
        if (!columns[j].empty()) {
            const Index low = columns[j].back();
            const auto degree = dims[low];
            if (degree > max_degree) continue;
            const double birth = complex[low].filtration;
            const double death = complex[j].filtration;
            if (death > birth) diagram.degrees[degree].push_back({birth, death});
            continue;
        }
        if (dim > max_degree) continue;
        // Zero column that is nobody's pivot: essential class.
        if (pivot_col[j] == kNone) diagram.degrees[dim].push_back({complex[j].filtration, kInfinity});
    }
    return diagram;
}

std::size_t betti_numbers(const FilteredComplex& complex, std::size_t degree) {
    if (degree + 1 > complex.max_dim())
        throw InputError("Betti number in degree " + std::to_string(degree) + " needs simplices of dimension " +
                         std::to_string(degree + 1) + " but the complex stops at " +
                         std::to_string(complex.max_dim()));

    // Ranks depend only on the column order being face-compatible, which the
    // filtration order guarantees.
    BoundaryMatrix boundary(complex);
    std::vector<std::vector<Index>> columns(boundary.size());
    std::vector<std::uint8_t> dims(boundary.size());
    for (std::size_t j = 0; j < boundary.size(); ++j) {
        const auto c = boundary.column(j);
        columns[j].assign(c.begin(), c.end());
        dims[j] = boundary.dim(j);
    }
    std::vector<Index> pivot_col(columns.size(), kNone);
    std::vector<bool> cleared(columns.size(), false);
    const auto up = static_cast<std::uint8_t>(degree + 1);
    const std::size_t rank_up = reduce_dimension(columns, dims, up, pivot_col, cleared);
    const std::size_t rank_here =
        degree == 0 ? 0 : reduce_dimension(columns, dims, static_cast<std::uint8_t>(degree), pivot_col, cleared);
    const std::size_t chains = complex.count(degree);
    return chains - rank_here - rank_up;
}

}  // namespace nnph
