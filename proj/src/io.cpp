#include "nnph/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "nnph/error.hpp"

namespace nnph::io {

using nlohmann::json;

std::string format_double(double v) {
    if (v == kInfinity) return "inf";
    if (v == -kInfinity) return "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

bool parse_double(std::string_view s, double& out) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s == "inf" || s == "+inf" || s == "Infinity") {
        out = kInfinity;
        return true;
    }
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

[[noreturn]] void fail_at(std::string_view source, std::size_t line, std::string_view what) {
    throw InputError(std::string(source) + ":" + std::to_string(line) + ": " + std::string(what));
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("write failed for " + path.string());
}

MlpWeights parse_mlp_json(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending token.
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw InputError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                         ": malformed JSON (non-finite numbers such as NaN are not accepted)");
    }

    auto fail = [&](const std::string& path, const std::string& what) -> void {
        throw InputError(std::string(source) + ": " + path + ": " + what);
    };
    if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array())
        fail("$", "expected an object with a \"layers\" array");

    MlpWeights mlp;
    const auto& layers = doc["layers"];
    for (std::size_t k = 0; k < layers.size(); ++k) {
        const std::string lpath = "$.layers[" + std::to_string(k) + "]";
        const auto& lj = layers[k];
        if (!lj.is_object() || !lj.contains("weights") || !lj["weights"].is_array())
            fail(lpath, "expected an object with a \"weights\" matrix");
        const auto& rows = lj["weights"];
        DenseLayer layer;
        const std::size_t out_dim = rows.size();
        const std::size_t in_dim = out_dim > 0 && rows[0].is_array() ? rows[0].size() : 0;
        layer.weights = Matrix(out_dim, in_dim);
        for (std::size_t o = 0; o < out_dim; ++o) {
            const auto& row = rows[o];
            const std::string rpath = lpath + ".weights[" + std::to_string(o) + "]";
            if (!row.is_array()) fail(rpath, "expected an array row");
            if (row.size() != in_dim)
                fail(rpath, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(in_dim));
            for (std::size_t i = 0; i < in_dim; ++i) {
                if (!row[i].is_number()) fail(rpath + "[" + std::to_string(i) + "]", "expected a number");
                layer.weights(o, i) = row[i].get<double>();
            }
        }
        if (lj.contains("bias") && !lj["bias"].is_null()) {
            const auto& bias = lj["bias"];
            if (!bias.is_array()) fail(lpath + ".bias", "expected an array");
            for (std::size_t i = 0; i < bias.size(); ++i) {
                if (!bias[i].is_number()) fail(lpath + ".bias[" + std::to_string(i) + "]", "expected a number");
                layer.bias.push_back(bias[i].get<double>());
            }
        }
        mlp.layers.push_back(std::move(layer));
    }
    try {
        mlp.validate();
    } catch (const InputError& e) {
        throw InputError(std::string(source) + ": " + e.what());
    }
    return mlp;
}

MlpWeights load_mlp_json(const std::filesystem::path& path) {
    return parse_mlp_json(read_text(path), path.string());
}

std::string mlp_to_json(const MlpWeights& mlp) {
    json doc;
    doc["layers"] = json::array();
    for (const auto& layer : mlp.layers) {
        json lj;
        json rows = json::array();
        for (std::size_t o = 0; o < layer.out_dim(); ++o) {
            json row = json::array();
            for (std::size_t i = 0; i < layer.in_dim(); ++i) row.push_back(layer.weights(o, i));
            rows.push_back(std::move(row));
        }
        lj["weights"] = std::move(rows);
        if (layer.has_bias()) lj["bias"] = layer.bias;
        doc["layers"].push_back(std::move(lj));
    }
    return doc.dump() + "\n";
}

void write_graph_tsv(std::ostream& os, const WeightedDigraph& g) {
    os << "# vertices=" << g.num_vertices() << '\n';
    for (const auto& e : g.edges()) os << e.src << '\t' << e.dst << '\t' << format_double(e.weight) << '\n';
}

WeightedDigraph read_graph_tsv(std::istream& is, std::string_view source) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t vertices = 0;
    bool have_header = false;
    std::vector<Edge> edges;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            constexpr std::string_view key = "# vertices=";
            if (std::string_view(line).substr(0, key.size()) == key) {
                if (!parse_int(std::string_view(line).substr(key.size()), vertices))
                    fail_at(source, lineno, "bad vertex count");
                have_header = true;
            }
            continue;
        }
        if (!have_header) fail_at(source, lineno, "missing '# vertices=N' header");
        const auto parts = split(line, '\t');
        Edge e;
        if (parts.size() != 3 || !parse_int(parts[0], e.src) || !parse_int(parts[1], e.dst) ||
            !parse_double(parts[2], e.weight))
            fail_at(source, lineno, "expected src<TAB>dst<TAB>weight");
        if (e.src >= vertices || e.dst >= vertices) fail_at(source, lineno, "vertex id out of range");
        if (!(e.weight > 0.0 && e.weight <= 1.0)) fail_at(source, lineno, "edge weight outside (0, 1]");
        edges.push_back(e);
    }
    if (!have_header) throw InputError(std::string(source) + ": missing '# vertices=N' header");
    WeightedDigraph g(vertices, std::move(edges));
    try {
        g.validate(std::numeric_limits<double>::min());
    } catch (const InputError& e) {
        throw InputError(std::string(source) + ": " + e.what());
    }
    return g;
}

void write_complex_dump(std::ostream& os, const FilteredComplex& complex) {
    for (const auto& s : complex.simplices()) {
        os << int(s.dim) << '\t' << format_double(s.filtration) << '\t';
        const auto v = s.verts();
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << '\n';
    }
}

namespace {

template <class Degrees>
void write_degrees(std::ostream& os, const Degrees& degrees) {
    os << "degree,birth,death\n";
    for (std::size_t d = 0; d < degrees.size(); ++d)
        for (const auto& iv : degrees[d]) os << d << ',' << format_double(iv.birth) << ',' << format_double(iv.death) << '\n';
}

}  // namespace

void write_diagram_csv(std::ostream& os, const PersistenceDiagram& d) { write_degrees(os, d.degrees); }
void write_diagram_csv(std::ostream& os, const CleanDiagram& d) { write_degrees(os, d.degrees); }

PersistenceDiagram read_diagram_csv(std::istream& is, std::size_t max_degree, std::string_view source) {
    PersistenceDiagram d(max_degree);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#' || line.rfind("degree", 0) == 0) continue;
        const auto parts = split(line, ',');
        std::size_t degree = 0;
        Interval iv;
        if (parts.size() != 3 || !parse_int(parts[0], degree) || !parse_double(parts[1], iv.birth) ||
            !parse_double(parts[2], iv.death))
            fail_at(source, lineno, "expected degree,birth,death");
        if (!std::isfinite(iv.birth)) fail_at(source, lineno, "birth must be finite");
        if (iv.death < iv.birth) fail_at(source, lineno, "death precedes birth");
        if (degree > max_degree) continue;
        d.degrees[degree].push_back(iv);
    }
    return d;
}

void write_vectorization(const std::filesystem::path& stem, const PersistenceVectorization& v) {
    const auto& p = v.params;
    const std::size_t n = p.grid.resolution;
    nlohmann::ordered_json side;
    side["kind"] = std::string(to_string(p.kind));
    side["grid"] = {{"t_min", p.grid.t_min}, {"t_max", p.grid.t_max}, {"resolution", n}};
    side["landscape_layers"] = p.landscape_layers;
    side["silhouette_power"] = p.silhouette_power;
    side["sigma"] = p.sigma;
    side["files"] = json::array();

    const std::size_t row_len = n;
    for (std::size_t d = 0; d < v.degrees.size(); ++d) {
        const auto file = stem.filename().string() + ".h" + std::to_string(d) + ".csv";
        std::ostringstream os;
        const auto& values = v.degrees[d];
        for (std::size_t r = 0; r < values.size() / row_len; ++r) {
            for (std::size_t i = 0; i < row_len; ++i)
                os << (i ? "," : "") << format_double(values[r * row_len + i]);
            os << '\n';
        }
        write_text(stem.parent_path() / file, os.str());
        side["files"].push_back(file);
    }
    write_text(stem.string() + ".json", side.dump(2) + "\n");
}

PersistenceVectorization read_vectorization(const std::filesystem::path& sidecar) {
    json side;
    try {
        side = json::parse(read_text(sidecar));
    } catch (const json::exception& e) {
        throw InputError(sidecar.string() + ": " + e.what());
    }
    PersistenceVectorization v;
    try {
        const auto kind = side.at("kind").get<std::string>();
        if (kind == "landscape") v.params.kind = VectorKind::Landscape;
        else if (kind == "silhouette") v.params.kind = VectorKind::Silhouette;
        else if (kind == "heat") v.params.kind = VectorKind::Heat;
        else throw InputError(sidecar.string() + ": unknown vectorization kind '" + kind + "'");
        const auto& g = side.at("grid");
        v.params.grid = {g.at("t_min").get<double>(), g.at("t_max").get<double>(), g.at("resolution").get<std::size_t>()};
        v.params.landscape_layers = side.at("landscape_layers").get<std::size_t>();
        v.params.silhouette_power = side.at("silhouette_power").get<double>();
        v.params.sigma = side.at("sigma").get<double>();
        v.params.grid.validate();
        for (const auto& f : side.at("files")) {
            const auto path = sidecar.parent_path() / f.get<std::string>();
            std::istringstream in(read_text(path));
            std::vector<double> values;
            std::string line;
            std::size_t lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (line.empty()) continue;
                for (auto cell : split(line, ',')) {
                    double x;
                    if (!parse_double(cell, x)) fail_at(path.string(), lineno, "bad number");
                    values.push_back(x);
                }
            }
            v.degrees.push_back(std::move(values));
        }
    } catch (const json::exception& e) {
        throw InputError(sidecar.string() + ": " + e.what());
    }
    return v;
}

namespace {

std::string matrix_csv(const Matrix& m) {
    std::ostringstream os;
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) os << (c ? "," : "") << format_double(m(r, c));
        os << '\n';
    }
    return os.str();
}

}  // namespace

void write_distance_matrix(const std::filesystem::path& stem, const DistanceMatrix& m) {
    const auto base = stem.filename().string();
    write_text(stem.string() + ".mean.csv", matrix_csv(m.mean));
    write_text(stem.string() + ".std.csv", matrix_csv(m.std));
    nlohmann::ordered_json manifest;
    manifest["measure"] = std::string(to_string(m.measure));
    manifest["labels"] = m.labels;
    manifest["size"] = m.labels.size();
    manifest["mean"] = base + ".mean.csv";
    manifest["std"] = base + ".std.csv";
    write_text(stem.string() + ".json", manifest.dump(2) + "\n");
}

void write_ppm_heatmap(const std::filesystem::path& path, const Matrix& m, int cell_px) {
    double hi = 0.0;
    for (double v : m.data) hi = std::max(hi, v);
    const std::size_t w = m.cols * static_cast<std::size_t>(cell_px);
    const std::size_t h = m.rows * static_cast<std::size_t>(cell_px);
    std::string out = "P6\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    out.reserve(out.size() + w * h * 3);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
            const double v = m(y / static_cast<std::size_t>(cell_px), x / static_cast<std::size_t>(cell_px));
            const double s = hi > 0.0 ? std::clamp(v / hi, 0.0, 1.0) : 0.0;
            // dark (similar) to bright yellow (dissimilar)
            out.push_back(static_cast<char>(static_cast<unsigned char>(40 + 215 * s)));
            out.push_back(static_cast<char>(static_cast<unsigned char>(20 + 200 * s * s)));
            out.push_back(static_cast<char>(static_cast<unsigned char>(80 * (1.0 - s))));
        }
    }
    write_text(path, out);
}

}  // namespace nnph::io
