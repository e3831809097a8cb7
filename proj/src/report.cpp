#include "roadcmp/report.hpp"

#include <chrono>
#include <cmath>
#include <functional>

namespace roadcmp {

using nlohmann::ordered_json;

const std::vector<std::string>& all_metric_names() {
    static const std::vector<std::string> names = {"ccq",   "tlts", "apls", "junct",
                                                   "graph", "newp", "newj", "newg"};
    return names;
}

bool is_metric_name(const std::string& name) {
    for (const auto& n : all_metric_names())
        if (n == name) return true;
    return false;
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

InputDesc describe_input(const std::string& path, const std::string& bytes, const GeoGraph& g) {
    InputDesc d;
    d.path = path;
    d.digest = fnv1a64_hex(bytes);
    d.nodes = g.node_count();
    d.edges = g.edge_count();
    d.length_m = g.total_length();
    return d;
}

ordered_json params_json(const ScoreParams& p) {
    ordered_json j;
    j["pixel"] = {{"resolution", p.pixel.resolution}, {"slack", p.pixel.slack}};
    j["path"] = {{"n_pairs", p.path.n_pairs},
                 {"snap_radius", p.path.snap_radius},
                 {"correct_tol", p.path.correct_tol},
                 {"match_radius", p.path.match_radius},
                 {"sample_spacing", p.path.sample_spacing}};
    j["junction"] = {{"d_max", p.junction.d_max},
                     {"alpha", p.junction.alpha},
                     {"angle_tol", p.junction.angle_tol}};
    j["subgraph"] = {{"n_starts", p.subgraph.n_starts},
                     {"travel", p.subgraph.travel},
                     {"interval", p.subgraph.interval},
                     {"match_dist", p.subgraph.match_dist}};
    j["apls_symmetric"] = p.apls_symmetric;
    return j;
}

namespace {

ordered_json input_json(const InputDesc& d) {
    return {{"path", d.path}, {"digest", d.digest},     {"nodes", d.nodes},
            {"edges", d.edges}, {"length_m", d.length_m}};
}

BBox joint_extent(const GeoGraph& gt, const GeoGraph& pred, const PixelParams& px) {
    BBox b = gt.bounds();
    b.expand(pred.bounds());
    if (b.empty()) b.expand(Vec2{0.0, 0.0});
    b.inflate(px.slack * px.resolution + 2.0 * px.resolution);
    return b;
}

}  // namespace

ScoreOutcome score_pair(const GeoGraph& gt, const GeoGraph& pred,
                        const std::vector<std::string>& metrics, const ScoreParams& params,
                        const InputDesc& gt_desc, const InputDesc& pred_desc, bool with_timings) {
    ScoreParams p = params;
    p.path.seed = params.seed;
    p.subgraph.seed = params.seed;

    ScoreOutcome out;
    ordered_json& report = out.report;
    report["tool"] = "roadcmp";
    report["version"] = kToolVersion;
    report["kind"] = "score_report";
    report["seed"] = p.seed;
    report["inputs"] = {{"gt", input_json(gt_desc)}, {"pred", input_json(pred_desc)}};
    report["params"] = params_json(p);
    report["metrics"] = ordered_json::object();
    report["summary"] = ordered_json::object();

    ordered_json errors = ordered_json::object();
    ordered_json timings = ordered_json::object();

    auto run = [&](const std::string& name, const std::function<ordered_json()>& fn) {
        bool wanted = false;
        for (const auto& m : metrics) wanted |= (m == name);
        if (!wanted) return;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            report["metrics"][name] = fn();
        } catch (const std::exception& e) {
            errors[name] = e.what();
            out.any_failed = true;
        }
        const auto t1 = std::chrono::steady_clock::now();
        timings[name] = std::chrono::duration<double, std::milli>(t1 - t0).count();
    };

    run("ccq", [&] {
        const BBox extent = joint_extent(gt, pred, p.pixel);
        const Mask mg = rasterize(gt, p.pixel.resolution, extent);
        const Mask mp = rasterize(pred, p.pixel.resolution, extent);
        const CCQScore s = ccq(mg, mp, p.pixel.slack);
        return ordered_json{{"correctness", s.correctness},
                            {"completeness", s.completeness},
                            {"quality", s.quality}};
    });
    run("tlts", [&] {
        const TLTSScore s = tlts(gt, pred, p.path);
        return ordered_json{{"correct", s.correct},
                            {"too_long", s.too_long},
                            {"too_short", s.too_short},
                            {"infeasible", s.infeasible},
                            {"pairs", s.pairs}};
    });
    run("apls", [&] {
        const double s = apls(gt, pred, p.path, p.apls_symmetric);
        return ordered_json{{"score", s}};
    });
    run("junct", [&] {
        const LegacyJunctionScore s = junct_legacy(gt, pred, p.junction);
        return ordered_json{{"f_correct", s.f_correct},
                            {"f_error", s.f_error},
                            {"f1", s.f1},
                            {"gt_junctions", s.gt_junctions},
                            {"pred_junctions", s.pred_junctions}};
    });
    run("graph", [&] {
        const SubgraphScore s = graph_legacy(gt, pred, p.subgraph);
        return ordered_json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                            {"tp", s.tp},               {"pp", s.pp},         {"ap", s.ap}};
    });
    run("newp", [&] {
        const NEWPScore s = newp(gt, pred, p.path);
        return ordered_json{{"precision", s.precision},
                            {"recall", s.recall},
                            {"f1", s.f1},
                            {"n_paths_gt", s.n_paths_gt},
                            {"n_paths_pred", s.n_paths_pred}};
    });
    run("newj", [&] {
        const NewJunctionScore s = newj(gt, pred, p.junction);
        return ordered_json{{"precision", s.precision},
                            {"recall", s.recall},
                            {"f1", s.f1},
                            {"tp", s.tp},
                            {"pp", s.pp},
                            {"ap", s.ap},
                            {"shared_edge_points", s.shared_edge_points}};
    });
    run("newg", [&] {
        const SubgraphScore s = newg(gt, pred, p.subgraph);
        return ordered_json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                            {"tp", s.tp},               {"pp", s.pp},         {"ap", s.ap}};
    });

    for (const auto& name : all_metric_names()) {
        if (!report["metrics"].contains(name)) continue;
        const auto scalar = summary_scalar(report, name);
        if (scalar) report["summary"][name] = *scalar;
    }
    if (!errors.empty()) report["errors"] = errors;
    if (with_timings) report["timings_ms"] = timings;
    return out;
}

std::optional<double> summary_scalar(const ordered_json& report, const std::string& metric) {
    if (!report.contains("metrics") || !report["metrics"].contains(metric)) return std::nullopt;
    const auto& m = report["metrics"][metric];
    if (metric == "ccq") return m.value("quality", 0.0);
    if (metric == "tlts") return m.value("correct", 0.0);
    if (metric == "apls") return m.value("score", 0.0);
    if (metric == "junct" || metric == "graph" || metric == "newp" || metric == "newj" ||
        metric == "newg")
        return m.value("f1", 0.0);
    return std::nullopt;
}

}  // namespace roadcmp
