#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nnph/diagram_ops.hpp"
#include "nnph/distances.hpp"
#include "nnph/flag_complex.hpp"
#include "nnph/graph.hpp"

namespace nnph::io {

/// Shortest decimal that round-trips; "inf" for +infinity.
std::string format_double(double v);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view text);

// Interchange JSON: {"layers": [{"weights": [[...], ...], "bias": [...]}]}.
// `source` names the document in diagnostics.
MlpWeights parse_mlp_json(std::string_view text, std::string_view source = "<input>");
MlpWeights load_mlp_json(const std::filesystem::path& path);
std::string mlp_to_json(const MlpWeights& mlp);

// Graph TSV: "# vertices=N" header, then src\tdst\tweight lines.
void write_graph_tsv(std::ostream& os, const WeightedDigraph& g);
WeightedDigraph read_graph_tsv(std::istream& is, std::string_view source = "<input>");

// One line per simplex: dim\tfiltration\tv0,v1,...
void write_complex_dump(std::ostream& os, const FilteredComplex& complex);

// Diagram CSV: degree,birth,death with "inf" for essential classes.
void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d);
void write_diagram_csv(std::ostream& os, const CleanDiagram& d);
PersistenceDiagram read_diagram_csv(std::istream& is, std::size_t max_degree, std::string_view source = "<input>");

// Vectorization: one CSV per degree (landscape: a row per layer, silhouette:
// one row, heat: one row per birth sample) plus a JSON sidecar holding the
// parameters and CSV file names. `stem` is the sidecar path without extension.
void write_vectorization(const std::filesystem::path& stem, const PersistenceVectorization& v);
PersistenceVectorization read_vectorization(const std::filesystem::path& sidecar);

// Distance matrices: <stem>.mean.csv, <stem>.std.csv, <stem>.json manifest.
void write_distance_matrix(const std::filesystem::path& stem, const DistanceMatrix& m);
/// Binary PPM heat map of a matrix, cell_px pixels per cell.
void write_ppm_heatmap(const std::filesystem::path& path, const Matrix& m, int cell_px = 8);

}  // namespace nnph::io
