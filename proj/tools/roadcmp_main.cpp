#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "roadcmp/errors.hpp"
#include "roadcmp/graph_io.hpp"
#include "roadcmp/perturb.hpp"
#include "roadcmp/report.hpp"
#include "roadcmp/rng.hpp"
#include "roadcmp/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitMetricFailure = 3;

// Accepts both TOML-style files (via the CLI11 base reader) and JSON files.
class ConfigTomlOrJson : public CLI::ConfigBase {
  public:
    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        const auto start = input.tellg();
        char c = '\0';
        while (input.get(c) && std::isspace(static_cast<unsigned char>(c))) {
        }
        input.clear();
        input.seekg(start);
        if (c == '{') {
            try {
                return from_json(nlohmann::json::parse(input), {});
            } catch (const nlohmann::json::parse_error& e) {
                throw CLI::FileError(std::string("config JSON parse failure: ") + e.what());
            }
        }
        return CLI::ConfigBase::from_config(input);
    }

  private:
    static std::string scalar_to_string(const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    static std::vector<CLI::ConfigItem> from_json(const nlohmann::json& j,
                                                  std::vector<std::string> parents) {
        std::vector<CLI::ConfigItem> results;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it->is_object()) {
                auto sub_parents = parents;
                sub_parents.push_back(it.key());
                auto sub = from_json(*it, sub_parents);
                results.insert(results.end(), sub.begin(), sub.end());
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = it.key();
            if (it->is_array()) {
                for (const auto& el : *it) item.inputs.push_back(scalar_to_string(el));
            } else {
                item.inputs.push_back(scalar_to_string(*it));
            }
            results.push_back(item);
        }
        return results;
    }
};

struct GlobalOpts {
    std::uint64_t seed = 0;
    int threads = 0;
    bool timings = false;
};

void add_score_param_options(CLI::App* cmd, roadcmp::ScoreParams& sp, double& alpha_opt) {
    cmd->add_option("--resolution", sp.pixel.resolution, "rasterization resolution, m/pixel")
        ->capture_default_str();
    cmd->add_option("--slack", sp.pixel.slack, "CCQ matching slack, pixels")->capture_default_str();
    cmd->add_option("--n-pairs", sp.path.n_pairs, "sampled node pairs for tlts/apls")
        ->capture_default_str();
    cmd->add_option("--snap-radius", sp.path.snap_radius, "endpoint snap radius, m")
        ->capture_default_str();
    cmd->add_option("--correct-tol", sp.path.correct_tol, "tlts relative length tolerance")
        ->capture_default_str();
    cmd->add_option("--match-radius", sp.path.match_radius, "path matching corridor radius, m")
        ->capture_default_str();
    cmd->add_option("--sample-spacing", sp.path.sample_spacing, "path walk step, m")
        ->capture_default_str();
    cmd->add_option("--d-max", sp.junction.d_max, "junction matching radius, m")
        ->capture_default_str();
    cmd->add_option("--alpha", alpha_opt, "junction distance weight (default: 2/d_max)");
    cmd->add_option("--angle-tol", sp.junction.angle_tol, "incident edge pairing tolerance, deg")
        ->capture_default_str();
    cmd->add_option("--n-starts", sp.subgraph.n_starts, "subgraph start samples")
        ->capture_default_str();
    cmd->add_option("--travel", sp.subgraph.travel, "subgraph traversal budget, m")
        ->capture_default_str();
    cmd->add_option("--interval", sp.subgraph.interval, "control point spacing, m")
        ->capture_default_str();
    cmd->add_option("--match-dist", sp.subgraph.match_dist, "control point matching radius, m")
        ->capture_default_str();
    cmd->add_flag("--apls-symmetric", sp.apls_symmetric, "average apls over both directions");
}

void add_knob_options(CLI::App* cmd, roadcmp::PerturbKnobs& k) {
    cmd->add_option("--gap", k.gap, "road material removed per interruption, m")
        ->capture_default_str();
    cmd->add_option("--r-min", k.r_min, "minimum overconnection span, m")->capture_default_str();
    cmd->add_option("--r-max", k.r_max, "maximum overconnection span, m")->capture_default_str();
    cmd->add_option("--offset", k.offset, "lateral offset of doubled roads, m")
        ->capture_default_str();
    cmd->add_option("--disk-radius", k.disk_radius, "removal disk radius, m")
        ->capture_default_str();
}

std::vector<std::string> parse_metric_list(const std::string& metrics) {
    std::vector<std::string> out;
    if (metrics == "all") return roadcmp::all_metric_names();
    std::stringstream ss(metrics);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (!roadcmp::is_metric_name(tok)) throw roadcmp::FormatError("unknown metric: " + tok);
        out.push_back(tok);
    }
    if (out.empty()) throw roadcmp::FormatError("empty metric list");
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw roadcmp::FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw roadcmp::FormatError("cannot write " + path);
    out << content;
}

struct LoadedInput {
    roadcmp::GeoGraph graph;
    roadcmp::InputDesc desc;
};

LoadedInput load_input(const std::string& path) {
    const std::string bytes = read_file(path);
    auto loaded = roadcmp::load_graph_file(path);
    if (loaded.dropped.total() > 0) {
        std::cerr << "warning: " << path << ": dropped " << loaded.dropped.self_loops
                  << " self-loops, " << loaded.dropped.duplicate_edges << " duplicate edges, "
                  << loaded.dropped.zero_length_edges << " zero-length edges\n";
    }
    if (loaded.merged_nodes > 0) {
        std::cerr << "warning: " << path << ": merged " << loaded.merged_nodes
                  << " coincident endpoints\n";
    }
    LoadedInput out;
    out.desc = roadcmp::describe_input(path, bytes, loaded.graph);
    out.graph = std::move(loaded.graph);
    return out;
}

// ---------------------------------------------------------------- score ---

struct ScoreArgs {
    std::string gt_path;
    std::string pred_path;
    std::string metrics = "all";
    std::string out_path;
    std::string csv_path;
    std::string dump_masks;
    std::string dump_matches;
    std::string dump_iterations;
};

int run_score(const ScoreArgs& args, roadcmp::ScoreParams params, const GlobalOpts& global) {
    const auto gt = load_input(args.gt_path);
    const auto pred = load_input(args.pred_path);
    const auto metric_list = parse_metric_list(args.metrics);

    params.seed = global.seed;
    const auto outcome = roadcmp::score_pair(gt.graph, pred.graph, metric_list, params, gt.desc,
                                             pred.desc, global.timings);

    const std::string text = outcome.report.dump(2) + "\n";
    if (args.out_path.empty()) {
        std::cout << text;
    } else {
        write_file(args.out_path, text);
    }

    if (!args.csv_path.empty()) {
        const bool fresh = !fs::exists(args.csv_path) || fs::file_size(args.csv_path) == 0;
        std::ofstream csv(args.csv_path, std::ios::app);
        if (!csv) throw roadcmp::FormatError("cannot write " + args.csv_path);
        if (fresh) {
            csv << "gt,pred,seed";
            for (const auto& m : roadcmp::all_metric_names()) csv << "," << m;
            csv << "\n";
        }
        csv << args.gt_path << "," << args.pred_path << "," << global.seed;
        for (const auto& m : roadcmp::all_metric_names()) {
            const auto v = roadcmp::summary_scalar(outcome.report, m);
            csv << ",";
            if (v) csv << *v;
        }
        csv << "\n";
    }

    if (!args.dump_masks.empty()) {
        roadcmp::BBox extent = gt.graph.bounds();
        extent.expand(pred.graph.bounds());
        extent.inflate(params.pixel.slack * params.pixel.resolution + 2.0 * params.pixel.resolution);
        roadcmp::write_mask_png(roadcmp::rasterize(gt.graph, params.pixel.resolution, extent),
                                args.dump_masks + "_gt.png");
        roadcmp::write_mask_png(roadcmp::rasterize(pred.graph, params.pixel.resolution, extent),
                                args.dump_masks + "_pred.png");
    }
    if (!args.dump_matches.empty()) {
        std::vector<roadcmp::JunctionMatch> matches;
        roadcmp::newj(gt.graph, pred.graph, params.junction, &matches);
        ordered_json jm = ordered_json::array();
        for (const auto& m : matches) {
            jm.push_back({{"kind",
                           m.kind == roadcmp::JunctionMatch::Kind::feature_feature ? "feature" :
                           m.kind == roadcmp::JunctionMatch::Kind::gt_feature_to_pred_edge
                               ? "gt_to_pred_edge"
                               : "pred_to_gt_edge"},
                          {"gt", m.gt_node},
                          {"pred", m.pred_node},
                          {"cost", m.cost},
                          {"o_gt", m.o_gt},
                          {"o_pred", m.o_pred}});
        }
        write_file(args.dump_matches, jm.dump(2) + "\n");
    }
    if (!args.dump_iterations.empty()) {
        std::vector<roadcmp::SubgraphIteration> iters;
        auto sp = params.subgraph;
        sp.seed = params.seed;
        roadcmp::newg(gt.graph, pred.graph, sp, &iters);
        std::ostringstream lines;
        for (const auto& it : iters) {
            ordered_json row = {{"iteration", it.index},     {"seeded_gt", it.seeded_gt},
                                {"x", it.start.x},           {"y", it.start.y},
                                {"counterpart_dist", it.counterpart_dist},
                                {"gt_points", it.gt_points}, {"pred_points", it.pred_points},
                                {"matched", it.matched}};
            lines << row.dump() << "\n";
        }
        write_file(args.dump_iterations, lines.str());
    }

    return outcome.any_failed ? kExitMetricFailure : kExitOk;
}

// -------------------------------------------------------------- perturb ---

struct PerturbArgs {
    std::string in_path;
    std::string kind;
    double severity = 0.0;
    std::string out_gt;
    std::string out_pred;
    std::string manifest_path;
};

int run_perturb(const PerturbArgs& args, const roadcmp::PerturbKnobs& knobs,
                const GlobalOpts& global) {
    const auto input = load_input(args.in_path);
    roadcmp::PerturbationSpec spec;
    spec.kind = roadcmp::perturb_kind_from_string(args.kind);
    spec.severity = args.severity;
    spec.seed = global.seed;

    const auto pair = roadcmp::make_pair(input.graph, spec, knobs);
    roadcmp::save_graph_file(pair.gt, args.out_gt);
    roadcmp::save_graph_file(pair.pred, args.out_pred);

    ordered_json manifest;
    manifest["tool"] = "roadcmp";
    manifest["version"] = roadcmp::kToolVersion;
    manifest["kind"] = "perturb_manifest";
    manifest["perturb_kind"] = args.kind;
    manifest["severity"] = spec.severity;
    manifest["achieved"] = pair.achieved;
    manifest["seed"] = spec.seed;
    manifest["knobs"] = {{"gap", knobs.gap},
                         {"r_min", knobs.r_min},
                         {"r_max", knobs.r_max},
                         {"offset", knobs.offset},
                         {"disk_radius", knobs.disk_radius}};
    manifest["input"] = {{"path", input.desc.path}, {"digest", input.desc.digest}};
    manifest["outputs"] = {{"gt", args.out_gt}, {"pred", args.out_pred}};

    const std::string text = manifest.dump(2) + "\n";
    std::cout << text;
    if (!args.manifest_path.empty()) write_file(args.manifest_path, text);
    return kExitOk;
}

// ---------------------------------------------------------------- sweep ---

struct SweepArgs {
    std::vector<std::string> in_paths;
    std::string kind;
    std::vector<double> grid;
    int n_seeds = 10;
    std::string out_dir;
};

int run_sweep(const SweepArgs& args, roadcmp::ScoreParams params,
              const roadcmp::PerturbKnobs& knobs, const GlobalOpts& global) {
    if (args.grid.empty()) throw roadcmp::FormatError("severity grid must not be empty");
    std::vector<double> grid = args.grid;
    std::sort(grid.begin(), grid.end());
    if (std::adjacent_find(grid.begin(), grid.end()) != grid.end())
        throw roadcmp::FormatError("severity grid values must be strictly increasing");
    const auto kind = roadcmp::perturb_kind_from_string(args.kind);

    std::vector<LoadedInput> inputs;
    for (const auto& p : args.in_paths) inputs.push_back(load_input(p));

    struct Cell {
        std::size_t input_idx, sev_idx;
        int seed_idx;
        std::uint64_t cell_seed;
        ordered_json result;
        bool failed = false;
    };
    std::vector<Cell> cells;
    for (std::size_t ii = 0; ii < inputs.size(); ++ii) {
        for (std::size_t si = 0; si < grid.size(); ++si) {
            for (int ki = 0; ki < args.n_seeds; ++ki) {
                Cell c;
                c.input_idx = ii;
                c.sev_idx = si;
                c.seed_idx = ki;
                // note: seed depends on (input, seed index) only, so runs at
                // different severities share their random draws
                c.cell_seed = roadcmp::Rng::substream(
                                  global.seed, 0x53574550ULL + ii * 1000003ULL + ki)
                                  .next_u64();
                cells.push_back(c);
            }
        }
    }

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t idx = 0; idx < static_cast<std::int64_t>(cells.size()); ++idx) {
        Cell& cell = cells[static_cast<std::size_t>(idx)];
        try {
            roadcmp::PerturbationSpec spec{kind, grid[cell.sev_idx], cell.cell_seed};
            const auto pair = roadcmp::make_pair(inputs[cell.input_idx].graph, spec, knobs);
            roadcmp::ScoreParams sp = params;
            sp.seed = cell.cell_seed;
            roadcmp::InputDesc gt_desc{"<sweep:gt>", "", pair.gt.node_count(),
                                       pair.gt.edge_count(), pair.gt.total_length()};
            roadcmp::InputDesc pred_desc{"<sweep:pred>", "", pair.pred.node_count(),
                                         pair.pred.edge_count(), pair.pred.total_length()};
            const auto outcome = roadcmp::score_pair(pair.gt, pair.pred,
                                                     roadcmp::all_metric_names(), sp, gt_desc,
                                                     pred_desc, false);
            cell.result["input"] = args.in_paths[cell.input_idx];
            cell.result["severity"] = grid[cell.sev_idx];
            cell.result["seed_index"] = cell.seed_idx;
            cell.result["cell_seed"] = cell.cell_seed;
            cell.result["achieved"] = pair.achieved;
            cell.result["metrics"] = outcome.report["metrics"];
            cell.result["summary"] = outcome.report["summary"];
            if (outcome.report.contains("errors")) {
                cell.result["errors"] = outcome.report["errors"];
                cell.failed = true;
            }
        } catch (const std::exception& e) {
            cell.result["severity"] = grid[cell.sev_idx];
            cell.result["seed_index"] = cell.seed_idx;
            cell.result["error"] = e.what();
            cell.failed = true;
        }
    }

    // mean curve per metric component over all non-failed cells
    // curves[metric][component][severity index] -> mean
    std::map<std::string, std::map<std::string, std::vector<double>>> sums;
    std::map<std::string, std::map<std::string, std::vector<int>>> counts;
    for (const auto& cell : cells) {
        if (cell.failed || !cell.result.contains("metrics")) continue;
        for (const auto& [metric, values] : cell.result["metrics"].items()) {
            for (const auto& [component, value] : values.items()) {
                if (!value.is_number()) continue;
                auto& s = sums[metric][component];
                auto& c = counts[metric][component];
                if (s.empty()) {
                    s.assign(grid.size(), 0.0);
                    c.assign(grid.size(), 0);
                }
                s[cell.sev_idx] += value.get<double>();
                c[cell.sev_idx] += 1;
            }
        }
    }

    ordered_json doc;
    doc["tool"] = "roadcmp";
    doc["version"] = roadcmp::kToolVersion;
    doc["kind"] = "sweep_result";
    doc["perturb_kind"] = args.kind;
    doc["grid"] = grid;
    doc["n_seeds"] = args.n_seeds;
    doc["seed"] = global.seed;
    doc["params"] = roadcmp::params_json(params);
    doc["knobs"] = {{"gap", knobs.gap},
                    {"r_min", knobs.r_min},
                    {"r_max", knobs.r_max},
                    {"offset", knobs.offset},
                    {"disk_radius", knobs.disk_radius}};
    doc["inputs"] = ordered_json::array();
    for (const auto& in : inputs) {
        doc["inputs"].push_back({{"path", in.desc.path},
                                 {"digest", in.desc.digest},
                                 {"nodes", in.desc.nodes},
                                 {"edges", in.desc.edges}});
    }
    doc["curves"] = ordered_json::object();
    for (const auto& [metric, comps] : sums) {
        ordered_json mj = ordered_json::object();
        for (const auto& [component, s] : comps) {
            ordered_json arr = ordered_json::array();
            for (std::size_t si = 0; si < grid.size(); ++si) {
                const int c = counts[metric][component][si];
                if (c > 0) {
                    arr.push_back(s[si] / c);
                } else {
                    arr.push_back(nullptr);
                }
            }
            mj[component] = arr;
        }
        doc["curves"][metric] = mj;
    }
    doc["cells"] = ordered_json::array();
    for (const auto& cell : cells) doc["cells"].push_back(cell.result);

    fs::create_directories(args.out_dir);
    write_file((fs::path(args.out_dir) / "sweep.json").string(), doc.dump(2) + "\n");

    // long-form per-cell values, and per-metric mean curves
    std::ostringstream csv;
    csv << "severity,seed,metric,component,value\n";
    for (const auto& cell : cells) {
        if (cell.failed || !cell.result.contains("metrics")) continue;
        for (const auto& [metric, values] : cell.result["metrics"].items()) {
            for (const auto& [component, value] : values.items()) {
                if (!value.is_number()) continue;
                csv << cell.result["severity"].get<double>() << "," << cell.seed_idx << ","
                    << metric << "," << component << "," << value.dump() << "\n";
            }
        }
    }
    write_file((fs::path(args.out_dir) / "curves.csv").string(), csv.str());

    for (const auto& [metric, comps] : sums) {
        std::ostringstream mc;
        mc << "severity,component,mean\n";
        for (std::size_t si = 0; si < grid.size(); ++si) {
            for (const auto& [component, s] : comps) {
                const int c = counts[metric][component][si];
                if (c == 0) continue;
                mc << grid[si] << "," << component << "," << (s[si] / c) << "\n";
            }
        }
        write_file((fs::path(args.out_dir) / ("curve_" + metric + ".csv")).string(), mc.str());
    }

    for (const auto& cell : cells) {
        if (cell.failed) std::cerr << "warning: sweep cell failed: " << cell.result.dump() << "\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------ correlate ---

struct CorrelateArgs {
    std::string reports_dir;
    std::string metrics = "all";
    std::string out_path;
};

int run_correlate(const CorrelateArgs& args, const GlobalOpts&) {
    const auto metric_list = parse_metric_list(args.metrics);

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(args.reports_dir)) {
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::map<std::string, std::vector<double>> series;
    int usable = 0;
    for (const auto& f : files) {
        ordered_json doc;
        try {
            doc = ordered_json::parse(read_file(f.string()));
        } catch (...) {
            continue;
        }
        if (doc.value("kind", "") != "score_report") continue;
        bool complete = true;
        for (const auto& m : metric_list)
            complete &= doc.contains("summary") && doc["summary"].contains(m);
        if (!complete) continue;
        for (const auto& m : metric_list) series[m].push_back(doc["summary"][m].get<double>());
        ++usable;
    }
    if (usable < 3) {
        std::cerr << "error: need at least 3 score reports covering the metric list, found "
                  << usable << "\n";
        return kExitInputError;
    }

    const std::size_t k = metric_list.size();
    std::vector<std::vector<std::optional<double>>> r(k, std::vector<std::optional<double>>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            r[i][j] = i == j ? std::optional<double>(1.0)
                             : roadcmp::pearson(series[metric_list[i]], series[metric_list[j]]);
        }
    }

    ordered_json doc;
    doc["tool"] = "roadcmp";
    doc["version"] = roadcmp::kToolVersion;
    doc["kind"] = "correlation_matrix";
    doc["metrics"] = metric_list;
    doc["n_samples"] = usable;
    doc["pearson"] = ordered_json::array();
    for (std::size_t i = 0; i < k; ++i) {
        ordered_json row = ordered_json::array();
        for (std::size_t j = 0; j < k; ++j) {
            if (r[i][j]) {
                row.push_back(*r[i][j]);
            } else {
                row.push_back(nullptr);  // zero variance: correlation undefined
            }
        }
        doc["pearson"].push_back(row);
    }

    // mean pairwise correlation of every metric triplet, best first
    struct Triplet {
        std::array<std::size_t, 3> idx;
        std::optional<double> mean;
    };
    std::vector<Triplet> triplets;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            for (std::size_t c = b + 1; c < k; ++c) {
                Triplet t{{a, b, c}, std::nullopt};
                if (r[a][b] && r[a][c] && r[b][c])
                    t.mean = (*r[a][b] + *r[a][c] + *r[b][c]) / 3.0;
                triplets.push_back(t);
            }
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& x, const Triplet& y) {
        if (x.mean.has_value() != y.mean.has_value()) return x.mean.has_value();
        if (!x.mean) return false;
        return *x.mean > *y.mean;
    });
    doc["triplets"] = ordered_json::array();
    for (const auto& t : triplets) {
        ordered_json tj;
        tj["metrics"] = {metric_list[t.idx[0]], metric_list[t.idx[1]], metric_list[t.idx[2]]};
        if (t.mean) {
            tj["mean"] = *t.mean;
        } else {
            tj["mean"] = nullptr;
        }
        doc["triplets"].push_back(tj);
    }

    const std::string text = doc.dump(2) + "\n";
    if (args.out_path.empty()) {
        std::cout << text;
    } else {
        write_file(args.out_path, text);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"topology-aware comparison of road network graphs"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<ConfigTomlOrJson>());
    app.set_config("--config", "", "TOML or JSON config file; command line flags win");

    GlobalOpts global;
    app.add_option("--seed", global.seed, "master RNG seed")->capture_default_str();
    app.add_option("--threads", global.threads, "worker thread count (0 = library default)")
        ->capture_default_str();
    app.add_flag("--timings", global.timings, "include per-metric wall times in reports");

    roadcmp::ScoreParams score_params;
    double alpha_opt = -1.0;
    roadcmp::PerturbKnobs knobs;

    ScoreArgs score_args;
    auto* score = app.add_subcommand("score", "score a prediction against a ground truth graph");
    score->add_option("--gt", score_args.gt_path, "ground truth graph (.json/.geojson)")->required();
    score->add_option("--pred", score_args.pred_path, "predicted graph (.json/.geojson)")->required();
    score->add_option("--metrics", score_args.metrics, "comma list of metrics or 'all'")
        ->capture_default_str();
    score->add_option("--out", score_args.out_path, "report path (default: stdout)");
    score->add_option("--csv", score_args.csv_path, "append a summary row to this CSV");
    score->add_option("--dump-masks", score_args.dump_masks, "write rasterized masks as PNG");
    score->add_option("--dump-matches", score_args.dump_matches, "write junction matches as JSON");
    score->add_option("--dump-iterations", score_args.dump_iterations,
                      "write per-start subgraph records as JSON lines");
    add_score_param_options(score, score_params, alpha_opt);

    PerturbArgs perturb_args;
    auto* perturb = app.add_subcommand("perturb", "inject a controlled error into a graph");
    perturb->add_option("--in", perturb_args.in_path, "input graph")->required();
    perturb->add_option("--kind", perturb_args.kind, "error kind")->required();
    perturb->add_option("--severity", perturb_args.severity,
                        "count, meters or fraction depending on kind")
        ->required();
    perturb->add_option("--out-gt", perturb_args.out_gt, "ground-truth output path")->required();
    perturb->add_option("--out-pred", perturb_args.out_pred, "prediction output path")->required();
    perturb->add_option("--manifest", perturb_args.manifest_path, "also write the manifest here");
    add_knob_options(perturb, knobs);

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "score metric sensitivity over a severity grid");
    sweep->add_option("--in", sweep_args.in_paths, "input graph(s)")->required();
    sweep->add_option("--kind", sweep_args.kind, "error kind")->required();
    sweep->add_option("--grid", sweep_args.grid, "severity grid")->required()->delimiter(',');
    sweep->add_option("--n-seeds", sweep_args.n_seeds, "seeds per severity")->capture_default_str();
    sweep->add_option("--out", sweep_args.out_dir, "output directory")->required();
    add_score_param_options(sweep, score_params, alpha_opt);
    add_knob_options(sweep, knobs);

    CorrelateArgs correlate_args;
    auto* correlate = app.add_subcommand("correlate", "correlate score reports in a directory");
    correlate->add_option("--reports", correlate_args.reports_dir, "directory of score reports")
        ->required();
    correlate->add_option("--metrics", correlate_args.metrics, "comma list of metrics or 'all'")
        ->capture_default_str();
    correlate->add_option("--out", correlate_args.out_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

#ifdef _OPENMP
    if (global.threads > 0) omp_set_num_threads(global.threads);
#endif
    score_params.junction.alpha =
        alpha_opt >= 0.0 ? alpha_opt : 2.0 / score_params.junction.d_max;

    try {
        if (app.got_subcommand(score)) return run_score(score_args, score_params, global);
        if (app.got_subcommand(perturb)) return run_perturb(perturb_args, knobs, global);
        if (app.got_subcommand(sweep)) return run_sweep(sweep_args, score_params, knobs, global);
        if (app.got_subcommand(correlate)) return run_correlate(correlate_args, global);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}
