// nnph: persistent-homology similarity of multilayer perceptrons.
//
//   nnph graph weights.json -o net.tsv
//   nnph ph net.tsv -o net.diagram.csv
//   nnph vec net.diagram.csv --kind heat -o net.heat
//   nnph dist a=run1.csv a=run2.csv b=run3.csv -o out/heat
//   nnph matrix experiments.json -o out/mnist
//   nnph compare-baseline a.json b.json
//
// Exit codes: 0 success, 1 input error, 2 numerical or internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "nnph/config.hpp"
#include "nnph/error.hpp"
#include "nnph/io.hpp"
#include "nnph/pipeline.hpp"
#include "nnph/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace nnph;

namespace {

// Flag values that override the config file when given.
struct Overrides {
    std::optional<std::string> config_file;
    std::optional<double> zeta, eta, infinity_cap, sigma, silhouette_power, distance_p, t_min, t_max;
    std::optional<std::string> bias_mode, measure;
    std::optional<std::size_t> max_degree, resolution, landscape_layers;
    std::optional<std::vector<double>> degree_weights;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    bool superlevel = false;

    PipelineConfig resolve() const {
        PipelineConfig c;
        if (config_file) c = PipelineConfig::from_json(io::read_text(*config_file));
        if (zeta) c.zeta = *zeta;
        if (bias_mode) {
            if (*bias_mode == "layer") c.bias_mode = BiasMode::PerLayer;
            else if (*bias_mode == "neuron") c.bias_mode = BiasMode::PerNeuron;
            else throw InputError("--bias-mode must be 'layer' or 'neuron'");
        }
        if (eta) c.eta = *eta;
        if (infinity_cap) c.infinity_cap = *infinity_cap;
        if (max_degree) c.max_degree = *max_degree;
        if (superlevel) c.superlevel = true;
        if (t_min) c.grid.t_min = *t_min;
        if (t_max) c.grid.t_max = *t_max;
        if (resolution) c.grid.resolution = *resolution;
        if (sigma) c.sigma = *sigma;
        if (landscape_layers) c.landscape_layers = *landscape_layers;
        if (silhouette_power) c.silhouette_power = *silhouette_power;
        if (measure) {
            const auto m = parse_measure(*measure);
            if (!m) throw InputError("unknown measure '" + *measure + "'");
            c.measure = *m;
        }
        if (distance_p) c.distance_p = *distance_p;
        if (degree_weights) c.degree_weights = *degree_weights;
        if (seed) c.seed = *seed;
        if (workers) c.workers = *workers;
        c.validate();
        return c;
    }
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_file, "PipelineConfig JSON; explicit flags take precedence");
    cmd->add_option("--workers", o.workers, "Worker threads");
}
void add_graph_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--zeta", o.zeta, "Normalization floor (default 1e-6)");
    cmd->add_option("--bias-mode", o.bias_mode, "Bias vertices: layer (default) or neuron");
}
void add_ph_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--max-degree", o.max_degree, "Highest homology degree (default 3)");
    cmd->add_option("--eta", o.eta, "Minimum interval lifespan kept (default 0.01)");
    cmd->add_option("--infinity-cap", o.infinity_cap, "Replacement for infinite deaths (default 1.0)");
    cmd->add_flag("--superlevel", o.superlevel, "Enter simplices at 1 - min edge weight instead");
}
void add_vec_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--t-min", o.t_min, "Grid start (default 0)");
    cmd->add_option("--t-max", o.t_max, "Grid end (default 1)");
    cmd->add_option("--resolution", o.resolution, "Grid samples per axis (default 100)");
    cmd->add_option("--sigma", o.sigma, "Heat kernel sigma (default 0.1)");
    cmd->add_option("--landscape-layers", o.landscape_layers, "Landscape layers K (default 10)");
    cmd->add_option("--silhouette-power", o.silhouette_power, "Silhouette weight power (default 1)");
}
void add_dist_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--measure", o.measure, "heat | silhouette | landscape | norm1 | frobenius");
    cmd->add_option("--distance-p", o.distance_p, "L^p order for vectorization distances (default 2)");
    cmd->add_option("--degree-weights", o.degree_weights, "Per-degree weights (default all 1)")->delimiter(',');
}

void emit_config(const fs::path& output, const PipelineConfig& c) {
    io::write_text(output.string() + ".config.json", c.to_json());
}

void ensure_parent(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

// Runs fn(i) for i in [0, n) on up to `workers` threads; the first exception wins.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            try {
                for (std::size_t i; (i = next.fetch_add(1)) < n;) fn(i);
            } catch (...) {
                std::lock_guard lock(m);
                if (!failure) failure = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

PipelineConfig single_threaded_complex(PipelineConfig c) {
    // Network-level parallelism is used instead.
    c.workers = 1;
    return c;
}

int cmd_graph(const fs::path& input, const fs::path& output, const PipelineConfig& c) {
    const auto mlp = io::load_mlp_json(input);
    const auto g = build_graph(mlp, c.zeta, c.bias_mode);
    ensure_parent(output);
    std::ostringstream os;
    io::write_graph_tsv(os, g);
    io::write_text(output, os.str());
    emit_config(output, c);
    return 0;
}

int cmd_ph(const fs::path& input, const fs::path& output, const std::optional<fs::path>& raw_out,
           const std::optional<fs::path>& dump, const PipelineConfig& c) {
    std::istringstream in(io::read_text(input));
    const auto g = io::read_graph_tsv(in, input.string());
    const auto complex = enumerate_simplices(g, c.complex_options());
    const auto raw = compute_persistence(complex, c.max_degree);
    ensure_parent(output);
    if (dump) {
        std::ostringstream os;
        io::write_complex_dump(os, complex);
        io::write_text(*dump, os.str());
    }
    if (raw_out) {
        auto sorted = raw;
        sorted.canonicalize();
        std::ostringstream os;
        io::write_diagram_csv(os, sorted);
        io::write_text(*raw_out, os.str());
    }
    auto cleaned = clean(raw, c);
    for (auto& d : cleaned.degrees) std::sort(d.begin(), d.end());
    std::ostringstream os;
    io::write_diagram_csv(os, cleaned);
    io::write_text(output, os.str());
    emit_config(output, c);
    return 0;
}

CleanDiagram load_clean_diagram(const fs::path& path, const PipelineConfig& c) {
    std::istringstream in(io::read_text(path));
    return clean(io::read_diagram_csv(in, c.max_degree, path.string()), c);
}

int cmd_vec(const fs::path& input, const fs::path& stem, const std::string& kind_name, const PipelineConfig& c) {
    const auto m = parse_measure(kind_name);
    if (!m || is_baseline(*m)) throw InputError("--kind must be heat, silhouette or landscape");
    const auto v = vectorize(load_clean_diagram(input, c), c.vector_params(vector_kind(*m)));
    ensure_parent(stem);
    io::write_vectorization(stem, v);
    emit_config(stem, c);
    return 0;
}

// "label=path" or a bare path labelled by its stem.
std::pair<std::string, fs::path> split_labelled(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq != std::string::npos && eq > 0) return {arg.substr(0, eq), arg.substr(eq + 1)};
    fs::path p(arg);
    return {p.stem().string(), p};
}

int cmd_dist(const std::vector<std::string>& inputs, const fs::path& stem, bool ppm, const PipelineConfig& c) {
    if (is_baseline(c.measure)) throw InputError("dist works on diagrams; use compare-baseline or matrix for norms");
    const auto kind = vector_kind(c.measure);

    std::vector<std::string> labels;
    std::vector<std::vector<fs::path>> groups;
    for (const auto& arg : inputs) {
        auto [label, path] = split_labelled(arg);
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            labels.push_back(label);
            groups.emplace_back();
            it = labels.end() - 1;
        }
        groups[static_cast<std::size_t>(it - labels.begin())].push_back(path);
    }

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t i = 0; i < groups.size(); ++i)
        for (std::size_t r = 0; r < groups[i].size(); ++r) jobs.emplace_back(i, r);
    std::vector<std::vector<PersistenceVectorization>> runs(groups.size());
    for (std::size_t i = 0; i < groups.size(); ++i) runs[i].resize(groups[i].size());
    parallel_for(jobs.size(), c.workers, [&](std::size_t j) {
        const auto [i, r] = jobs[j];
        const auto& path = groups[i][r];
        // Precomputed vectorizations carry their own parameters; diagrams use the config.
        runs[i][r] = path.extension() == ".json" ? io::read_vectorization(path)
                                                 : vectorize(load_clean_diagram(path, c), c.vector_params(kind));
    });
    for (const auto& exp : runs)
        for (const auto& v : exp)
            if (v.params.kind != kind)
                throw InputError("input vectorization kind '" + std::string(to_string(v.params.kind)) +
                                 "' does not match measure '" + std::string(to_string(c.measure)) + "'");

    const auto m = assemble_matrix(labels, runs, c.measure, {c.distance_p, c.degree_weights, c.workers});
    ensure_parent(stem);
    io::write_distance_matrix(stem, m);
    if (ppm) io::write_ppm_heatmap(stem.string() + ".ppm", m.mean);
    emit_config(stem, c);
    return 0;
}

// {"experiments": [{"label": "...", "runs": ["weights.json", ...]}, ...]}
// Paths are relative to the manifest.
int cmd_matrix(const fs::path& manifest_path, const fs::path& stem, const std::vector<std::string>& measure_names,
               bool ppm, const PipelineConfig& c) {
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(io::read_text(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw InputError(manifest_path.string() + ": " + e.what());
    }
    std::vector<std::string> labels;
    std::vector<std::vector<fs::path>> files;
    try {
        for (const auto& exp : manifest.at("experiments")) {
            labels.push_back(exp.at("label").get<std::string>());
            files.emplace_back();
            for (const auto& r : exp.at("runs")) files.back().push_back(manifest_path.parent_path() / r.get<std::string>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(manifest_path.string() + ": expected {\"experiments\": [{\"label\", \"runs\"}]}: " + e.what());
    }

    std::vector<Measure> measures;
    for (const auto& name : measure_names) {
        const auto m = parse_measure(name);
        if (!m) throw InputError("unknown measure '" + name + "'");
        measures.push_back(*m);
    }
    if (measures.empty()) measures = {c.measure};

    std::vector<std::pair<std::size_t, std::size_t>> jobs;
    for (std::size_t i = 0; i < files.size(); ++i)
        for (std::size_t r = 0; r < files[i].size(); ++r) jobs.emplace_back(i, r);
    std::vector<std::vector<CleanDiagram>> diagrams(files.size());
    std::vector<std::vector<Matrix>> adjacency(files.size());
    for (std::size_t i = 0; i < files.size(); ++i) {
        diagrams[i].resize(files[i].size());
        adjacency[i].resize(files[i].size());
    }
    const bool need_adjacency = std::any_of(measures.begin(), measures.end(), is_baseline);
    const auto per_network = single_threaded_complex(c);
    parallel_for(jobs.size(), c.workers, [&](std::size_t j) {
        const auto [i, r] = jobs[j];
        const auto g = build_graph(io::load_mlp_json(files[i][r]), c.zeta, c.bias_mode);
        diagrams[i][r] = clean(graph_persistence(g, per_network), per_network);
        if (need_adjacency) adjacency[i][r] = g.adjacency();
    });

    ensure_parent(stem);
    for (auto m : measures) {
        DistanceMatrix dm;
        if (is_baseline(m)) {
            dm = assemble_baseline_matrix(labels, adjacency, m, c.workers);
        } else {
            std::vector<std::vector<PersistenceVectorization>> runs(diagrams.size());
            const auto params = c.vector_params(vector_kind(m));
            for (std::size_t i = 0; i < diagrams.size(); ++i)
                for (const auto& d : diagrams[i]) runs[i].push_back(vectorize(d, params));
            dm = assemble_matrix(labels, runs, m, {c.distance_p, c.degree_weights, c.workers});
        }
        const fs::path out = stem.string() + "." + std::string(to_string(m));
        io::write_distance_matrix(out, dm);
        if (ppm) {
            io::write_ppm_heatmap(out.string() + ".mean.ppm", dm.mean);
            io::write_ppm_heatmap(out.string() + ".std.ppm", dm.std);
        }
    }
    emit_config(stem, c);
    return 0;
}

int cmd_compare_baseline(const fs::path& a_path, const std::optional<fs::path>& b_path,
                         const std::optional<std::uint64_t>& permute_seed, const std::optional<fs::path>& output,
                         const PipelineConfig& c) {
    const auto ga = build_graph(io::load_mlp_json(a_path), c.zeta, c.bias_mode);
    WeightedDigraph gb;
    std::string b_name;
    if (b_path) {
        gb = build_graph(io::load_mlp_json(*b_path), c.zeta, c.bias_mode);
        b_name = b_path->string();
    } else {
        // Control pair: the same network with neurons shuffled inside every layer.
        std::mt19937_64 rng(permute_seed.value_or(c.seed));
        std::vector<std::vector<std::uint32_t>> perms;
        for (auto w : ga.layer_widths()) {
            std::vector<std::uint32_t> p(w);
            std::iota(p.begin(), p.end(), 0u);
            std::shuffle(p.begin(), p.end(), rng);
            perms.push_back(std::move(p));
        }
        gb = permute_neurons(ga, perms);
        b_name = a_path.string() + " (neurons permuted)";
    }

    nlohmann::ordered_json report;
    report["a"] = a_path.string();
    report["b"] = b_name;
    for (auto m : {Measure::Norm1, Measure::Frobenius}) {
        const auto aa = ga.adjacency(), bb = gb.adjacency();
        if (aa.rows == bb.rows)
            report[std::string(to_string(m))] = baseline_norm_distance(aa, bb, m);
        else
            report[std::string(to_string(m))] = nullptr;  // undefined for different sizes
    }
    const auto da = clean(graph_persistence(ga, c), c);
    const auto db = clean(graph_persistence(gb, c), c);
    for (auto m : {Measure::Heat, Measure::Silhouette, Measure::Landscape}) {
        const auto params = c.vector_params(vector_kind(m));
        report[std::string(to_string(m))] =
            vector_distance(vectorize(da, params), vectorize(db, params), c.distance_p, c.degree_weights);
    }
    const auto text = report.dump(2) + "\n";
    if (output) {
        ensure_parent(*output);
        io::write_text(*output, text);
        emit_config(*output, c);
    } else {
        std::cout << text;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persistent homology of MLP weight graphs and distances between networks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "nnph 1.0");
    app.add_flag_callback("--simd-info", [] {
        std::cout << "kernels: " << simd::active_kernels().name << "\n";
        std::exit(0);
    }, "Print the active kernel variant and exit");

    Overrides o;
    std::string input;
    std::string output;

    auto* graph = app.add_subcommand("graph", "Interchange JSON -> weighted digraph TSV");
    graph->add_option("weights", input, "Interchange JSON")->required();
    graph->add_option("-o,--output", output, "Graph TSV")->required();
    add_common(graph, o);
    add_graph_flags(graph, o);

    std::optional<std::string> raw_out, dump;
    auto* ph = app.add_subcommand("ph", "Graph TSV -> filtered, capped persistence diagram CSV");
    ph->add_option("graph", input, "Graph TSV")->required();
    ph->add_option("-o,--output", output, "Diagram CSV")->required();
    ph->add_option("--raw-output", raw_out, "Also write the diagram before filtering and capping");
    ph->add_option("--complex-dump", dump, "Write the filtered complex, one simplex per line");
    add_common(ph, o);
    add_ph_flags(ph, o);

    std::string kind = "heat";
    auto* vec = app.add_subcommand("vec", "Diagram CSV -> vectorization CSVs + JSON sidecar");
    vec->add_option("diagram", input, "Diagram CSV")->required();
    vec->add_option("-o,--output", output, "Output stem")->required();
    vec->add_option("--kind", kind, "heat | silhouette | landscape");
    add_common(vec, o);
    add_ph_flags(vec, o);
    add_vec_flags(vec, o);

    std::vector<std::string> inputs;
    bool ppm = false;
    auto* dist = app.add_subcommand("dist", "Diagrams or vectorizations -> mean/std distance matrix");
    dist->add_option("inputs", inputs, "[label=]diagram.csv or [label=]vectorization.json; equal labels are runs")
        ->required();
    dist->add_option("-o,--output", output, "Output stem")->required();
    dist->add_flag("--ppm", ppm, "Also write a PPM heat map of the mean matrix");
    add_common(dist, o);
    add_ph_flags(dist, o);
    add_vec_flags(dist, o);
    add_dist_flags(dist, o);

    std::vector<std::string> measures;
    auto* matrix = app.add_subcommand("matrix", "Experiment manifest -> distance matrices for every measure");
    matrix->add_option("manifest", input, "Experiment manifest JSON")->required();
    matrix->add_option("-o,--output", output, "Output stem")->required();
    matrix->add_option("--measures", measures, "Measures to emit (default: the configured measure)")->delimiter(',');
    matrix->add_flag("--ppm", ppm, "Also write PPM heat maps");
    add_common(matrix, o);
    add_graph_flags(matrix, o);
    add_ph_flags(matrix, o);
    add_vec_flags(matrix, o);
    add_dist_flags(matrix, o);

    std::optional<std::string> second, report_out;
    std::optional<std::uint64_t> permute_seed;
    auto* compare = app.add_subcommand("compare-baseline", "Baseline norms vs diagram distances for two networks");
    compare->add_option("a", input, "Interchange JSON")->required();
    compare->add_option("b", second, "Second network; omitted: a neuron-permuted copy of the first");
    compare->add_option("--permute-seed", permute_seed, "Seed for the permuted copy (default: config seed)");
    compare->add_option("-o,--output", report_out, "Write the JSON report here instead of stdout");
    add_common(compare, o);
    add_graph_flags(compare, o);
    add_ph_flags(compare, o);
    add_vec_flags(compare, o);
    add_dist_flags(compare, o);
    compare->add_option("--seed", o.seed, "Pipeline seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto config = o.resolve();
        if (*graph) return cmd_graph(input, output, config);
        if (*ph) return cmd_ph(input, output, raw_out ? std::optional<fs::path>(*raw_out) : std::nullopt,
                               dump ? std::optional<fs::path>(*dump) : std::nullopt, config);
        if (*vec) return cmd_vec(input, output, kind, config);
        if (*dist) return cmd_dist(inputs, output, ppm, config);
        if (*matrix) return cmd_matrix(input, output, measures, ppm, config);
        if (*compare)
            return cmd_compare_baseline(input, second ? std::optional<fs::path>(*second) : std::nullopt, permute_seed,
                                        report_out ? std::optional<fs::path>(*report_out) : std::nullopt, config);
    } catch (const InputError& e) {
        std::cerr << "nnph: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "nnph: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "nnph: internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
