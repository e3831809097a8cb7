// End-to-end acceptance suite. Drives the CLI binary (passed as argv[1]) and
// the library, printing one PASS/FAIL line per criterion:
//   1. identity scoring on synthetic graphs
//   2. assignment and shortest-path oracle equivalence
//   3. closed-form score spot checks
//   4. sensitivity / blind-spot reproduction over the error benchmark
//   5. consistency (new scores correlate better than any legacy triplet)
//   6. bit-identical reports across thread counts
//   7. single-pair scoring wall time
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "roadcmp/graph_io.hpp"
#include "roadcmp/graph_ops.hpp"
#include "roadcmp/junction_metrics.hpp"
#include "roadcmp/path_metrics.hpp"
#include "roadcmp/perturb.hpp"
#include "roadcmp/reference.hpp"
#include "roadcmp/rng.hpp"
#include "roadcmp/stats.hpp"
#include "roadcmp/subgraph_metrics.hpp"
#include "roadcmp/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace roadcmp;

namespace {

std::string g_binary;
fs::path g_work;
int g_failures = 0;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int run_cli(const std::string& args) {
    const std::string cmd = g_binary + " " + args + " > /dev/null 2>> " +
                            (g_work / "cli_stderr.log").string();
    const int status = std::system(cmd.c_str());
    return status < 0 ? status : (status >> 8) & 0xff;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return {};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void verdict(int criterion, bool pass, const std::string& detail) {
    std::printf("CRITERION %d %s - %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Check {
    bool ok = true;
    std::string first_failure;
    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

// ---------------------------------------------------------- criteria 1+6 ---

std::vector<fs::path> g_identity_reports_t1;

void criterion_1_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    double worst_sampled = 1.0;

    for (int i = 0; i < 10; ++i) {
        const int target = 220 + i * 85;  // 220 .. 985 nodes
        const GeoGraph g = make_city_sized(900 + i, target, 150.0);
        c.expect(g.node_count() >= 200 && g.node_count() <= 1000,
                 "graph " + std::to_string(i) + " size " + std::to_string(g.node_count()));
        const fs::path graph_path = g_work / ("identity_" + std::to_string(i) + ".json");
        save_graph_file(g, graph_path.string());

        const fs::path report = g_work / ("identity_" + std::to_string(i) + "_t1.json");
        const int code = run_cli("--seed 7 --threads 1 score --gt " + graph_path.string() +
                                 " --pred " + graph_path.string() + " --metrics all --out " +
                                 report.string());
        c.expect(code == 0, "score exit code " + std::to_string(code));
        if (code != 0) continue;
        g_identity_reports_t1.push_back(report);

        const json r = json::parse(slurp(report));
        const auto& m = r["metrics"];
        c.expect(m["ccq"]["correctness"] == 1.0 && m["ccq"]["completeness"] == 1.0 &&
                     m["ccq"]["quality"] == 1.0,
                 "ccq not exactly (1,1,1) on graph " + std::to_string(i));
        c.expect(m["apls"]["score"] == 1.0, "apls not exactly 1 on graph " + std::to_string(i));
        c.expect(m["tlts"]["correct"] == 1.0, "tlts correct not exactly 1 on graph " + std::to_string(i));
        c.expect(m["junct"]["f_correct"] == 1.0 && m["junct"]["f_error"] == 0.0,
                 "junct not perfect on graph " + std::to_string(i));
        for (const auto* name : {"newp", "newj", "newg"}) {
            const double prec = m[name]["precision"].get<double>();
            const double rec = m[name]["recall"].get<double>();
            worst_sampled = std::min({worst_sampled, prec, rec});
            c.expect(std::abs(prec - 1.0) <= 0.02 && std::abs(rec - 1.0) <= 0.02,
                     std::string(name) + " off identity on graph " + std::to_string(i));
        }
    }

    const double elapsed = seconds_since(t0);
    c.expect(elapsed < 120.0, "identity suite took " + fmt(elapsed) + " s (limit 120)");
    verdict(1, c.ok,
            c.ok ? "identity suite over 10 graphs, worst sampled component " +
                       fmt(worst_sampled) + ", " + fmt(elapsed) + " s"
                 : c.first_failure);
}

// ------------------------------------------------------------ criterion 2 ---

void criterion_2_oracles() {
    Check c;

    Rng rng(4242);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.index(7));
        const int m = 1 + static_cast<int>(rng.index(7));
        std::vector<std::vector<double>> cost(n, std::vector<double>(m));
        for (auto& row : cost) {
            for (auto& v : row) {
                v = static_cast<double>(rng.index(100));
                if (rng.next_double() < 0.08) v = 1e15;
            }
        }
        const auto pairs = hungarian(cost);
        double total = 0.0;
        for (const auto& [i, j] : pairs) total += std::min(cost[i][j], 1e15);
        total += 1e15 * static_cast<double>(std::min(n, m) - static_cast<int>(pairs.size()));
        const double brute = reference::hungarian_bruteforce(cost);
        c.expect(total == brute, "assignment cost mismatch on trial " + std::to_string(trial));
    }

    int path_checks = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng grng(5000 + trial);
        GraphBuilder b;
        const int n = 4 + static_cast<int>(grng.index(7));  // 4..10 nodes
        for (int i = 0; i < n; ++i)
            b.add_node(i, {quantize64(grng.uniform(0.0, 80.0)), quantize64(grng.uniform(0.0, 80.0))});
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (grng.next_double() < 0.35) b.add_edge(i, j);
            }
        }
        const GeoGraph g = b.build();
        const NodeId a = static_cast<NodeId>(grng.index(n));
        const NodeId bb = static_cast<NodeId>(grng.index(n));
        const auto fast = shortest_path(g, a, bb);
        const auto slow = reference::shortest_path_exhaustive(g, a, bb);
        c.expect(fast.has_value() == slow.has_value(),
                 "reachability mismatch on trial " + std::to_string(trial));
        if (fast && slow) {
            c.expect(std::abs(fast->length - *slow) <= 1e-12 * std::max(1.0, *slow),
                     "path length mismatch on trial " + std::to_string(trial));
            ++path_checks;
        }
    }
    c.expect(path_checks >= 50, "too few reachable oracle pairs");

    verdict(2, c.ok,
            c.ok ? "hungarian == permutation minimum on 100 matrices; shortest_path == "
                   "exhaustive enumeration on 100 graphs"
                 : c.first_failure);
}

// ------------------------------------------------------------ criterion 3 ---

void criterion_3_formulas() {
    Check c;
    c.expect(path_coverage_probability({6.0, 4.0}, 10.0) == 0.52,
             "coverage probability of the 6+4 split is not exactly 0.52");

    const GeoGraph gt = [] {
        GraphBuilder b;
        b.add_node(0, {-100, 0});
        b.add_node(1, {0, 0});
        b.add_node(2, {100, 0});
        b.add_node(3, {0, 100});
        b.add_edge(0, 1);
        b.add_edge(1, 2);
        b.add_edge(1, 3);
        return b.build();
    }();
    const GeoGraph pred = [] {
        GraphBuilder b;
        b.add_node(0, {-100, 0});
        b.add_node(2, {100, 0});
        b.add_edge(0, 2);
        return b.build();
    }();
    const NewJunctionScore s = newj(gt, pred, JunctionParams{});
    c.expect(s.recall == 2.0 / 3.0, "degree-3 junction against a plain edge: recall != 2/3");
    c.expect(s.tp == 4.0 && s.ap == 6.0, "degree-3 junction bookkeeping off");

    verdict(3, c.ok,
            c.ok ? "coverage probability 0.52 exact; junction fallback recall 2/3 exact"
                 : c.first_failure);
}

// ---------------------------------------------------------- criteria 4+6 ---

struct KindPlan {
    PerturbKind kind;
    std::vector<double> grid;
    std::string extra_flags;
    int city_cols, city_rows;
    double spacing;
};

const std::vector<KindPlan>& kind_plans() {
    static const std::vector<KindPlan> plans = {
        {PerturbKind::interruptions, {0, 50, 100, 150, 200}, "", 22, 20, 200.0},
        {PerturbKind::overconnections, {0, 15, 30, 45, 60}, "", 22, 20, 200.0},
        {PerturbKind::node_noise, {0, 5, 10, 15, 20}, "", 22, 20, 200.0},
        {PerturbKind::doubled_pred, {0, 20, 40, 60, 80}, "--offset 25", 22, 20, 200.0},
        {PerturbKind::doubled_gt, {0, 20, 40, 60, 80}, "--offset 25", 22, 20, 200.0},
        {PerturbKind::far_false_positives, {0, 0.08, 0.16, 0.24, 0.32}, "--disk-radius 700", 26,
         24, 200.0},
    };
    return plans;
}

std::string sweep_score_flags() {
    return "--n-pairs 100 --n-starts 120 --travel 200 --interval 20 --resolution 2 --slack 3";
}

fs::path sweep_dir(const KindPlan& plan, int threads) {
    return g_work / ("sweep_" + std::string(to_string(plan.kind)) + "_t" + std::to_string(threads));
}

bool run_sweeps(int threads, Check& c) {
    for (const auto& plan : kind_plans()) {
        CityOptions opt;
        opt.cols = plan.city_cols;
        opt.rows = plan.city_rows;
        opt.spacing = plan.spacing;
        const GeoGraph city = make_city(1234, opt);
        const fs::path graph_path =
            g_work / ("sweep_city_" + std::string(to_string(plan.kind)) + ".json");
        if (!fs::exists(graph_path)) save_graph_file(city, graph_path.string());

        std::ostringstream grid;
        for (std::size_t i = 0; i < plan.grid.size(); ++i) {
            if (i) grid << ",";
            grid << plan.grid[i];
        }
        const fs::path out = sweep_dir(plan, threads);
        const std::string cmd = "--seed 99 --threads " + std::to_string(threads) + " sweep --in " +
                                graph_path.string() + " --kind " + to_string(plan.kind) +
                                " --grid " + grid.str() + " --n-seeds 10 --out " + out.string() +
                                " " + sweep_score_flags() + " " + plan.extra_flags;
        const int code = run_cli(cmd);
        c.expect(code == 0, std::string("sweep failed for ") + to_string(plan.kind));
        if (code != 0) return false;
    }
    return true;
}

std::vector<double> curve(const json& sweep, const std::string& metric,
                          const std::string& component) {
    std::vector<double> out;
    for (const auto& v : sweep["curves"][metric][component]) out.push_back(v.get<double>());
    return out;
}

void criterion_4_sensitivity_and_6_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    Check c4;

    if (!run_sweeps(8, c4)) {
        verdict(4, false, c4.first_failure);
        verdict(6, false, "sweeps did not run");
        return;
    }

    std::string blind_spot_note;
    for (const auto& plan : kind_plans()) {
        const json sweep = json::parse(slurp(sweep_dir(plan, 8) / "sweep.json"));
        const std::vector<double> severities = plan.grid;

        // every corrected metric must respond monotonically to every kind
        for (const auto* metric : {"newp", "newj", "newg"}) {
            const auto f1 = curve(sweep, metric, "f1");
            const auto rho = spearman(severities, f1);
            c4.expect(rho.has_value() && *rho <= -0.9,
                      std::string(metric) + " f1 vs " + to_string(plan.kind) + " severity: rho " +
                          (rho ? fmt(*rho) : "undefined"));
        }

        // each legacy blind spot, restated as a measurable contrast
        if (plan.kind == PerturbKind::doubled_pred) {
            const auto apls_curve = curve(sweep, "apls", "score");
            const auto tlts_curve = curve(sweep, "tlts", "correct");
            const auto newp_prec = curve(sweep, "newp", "precision");
            const double apls_shift = std::abs(apls_curve.back() - apls_curve.front());
            const double tlts_shift = std::abs(tlts_curve.back() - tlts_curve.front());
            const double newp_drop = newp_prec.front() - newp_prec.back();
            c4.expect(apls_shift < 0.02, "apls moved " + fmt(apls_shift) + " under doubled roads");
            c4.expect(tlts_shift < 0.02, "tlts moved " + fmt(tlts_shift) + " under doubled roads");
            c4.expect(newp_drop > 0.15, "newp precision dropped only " + fmt(newp_drop));
            blind_spot_note += "doubled: apls " + fmt(apls_shift) + "/newp -" + fmt(newp_drop) + " ";
        }
        if (plan.kind == PerturbKind::interruptions) {
            const auto junct_f1 = curve(sweep, "junct", "f1");
            const auto newj_rec = curve(sweep, "newj", "recall");
            const double junct_shift = std::abs(junct_f1.back() - junct_f1.front());
            const double newj_drop = newj_rec.front() - newj_rec.back();
            c4.expect(junct_shift < 0.02, "junct moved " + fmt(junct_shift) + " under breaks");
            c4.expect(newj_drop > 0.15, "newj recall dropped only " + fmt(newj_drop));
            blind_spot_note += "breaks: junct " + fmt(junct_shift) + "/newj -" + fmt(newj_drop) + " ";
        }
        if (plan.kind == PerturbKind::far_false_positives) {
            const auto graph_f1 = curve(sweep, "graph", "f1");
            const auto newg_prec = curve(sweep, "newg", "precision");
            const double graph_shift = std::abs(graph_f1.back() - graph_f1.front());
            const double newg_drop = newg_prec.front() - newg_prec.back();
            c4.expect(graph_shift < 0.02, "graph moved " + fmt(graph_shift) + " under far removal");
            c4.expect(newg_drop > 0.15, "newg precision dropped only " + fmt(newg_drop));
            blind_spot_note += "far-fp: graph " + fmt(graph_shift) + "/newg -" + fmt(newg_drop);
        }
    }

    const double elapsed_one_run = seconds_since(t0);
    c4.expect(elapsed_one_run < 1800.0, "sensitivity runtime " + fmt(elapsed_one_run) + " s");
    verdict(4, c4.ok,
            c4.ok ? "all 18 monotonicity checks and 3 blind-spot contrasts hold (" +
                        blind_spot_note + ", " + fmt(elapsed_one_run) + " s)"
                  : c4.first_failure);

    // criterion 6: identical bytes at --threads 1
    Check c6;
    if (run_sweeps(1, c6)) {
        for (const auto& plan : kind_plans()) {
            for (const auto* file : {"sweep.json", "curves.csv"}) {
                const std::string a = slurp(sweep_dir(plan, 8) / file);
                const std::string b = slurp(sweep_dir(plan, 1) / file);
                c6.expect(!a.empty() && a == b,
                          std::string(file) + " differs across thread counts for " +
                              to_string(plan.kind));
            }
        }
    }
    for (const auto& report : g_identity_reports_t1) {
        fs::path t8 = report;
        t8.replace_filename(report.stem().string().substr(0, report.stem().string().size() - 3) +
                            "_t8.json");
        const std::string identity_graph =
            (g_work / (report.stem().string().substr(0, report.stem().string().size() - 3) + ".json"))
                .string();
        const int code = run_cli("--seed 7 --threads 8 score --gt " + identity_graph + " --pred " +
                                 identity_graph + " --metrics all --out " + t8.string());
        c6.expect(code == 0, "identity rescore failed");
        c6.expect(slurp(report) == slurp(t8), "identity report differs across thread counts");
    }
    verdict(6, c6.ok,
            c6.ok ? "identity and sweep outputs byte-identical at --threads 1 and 8"
                  : c6.first_failure);
}

// ------------------------------------------------------------ criterion 5 ---

void criterion_5_consistency() {
    Check c;
    const fs::path reports = g_work / "ensemble_reports";
    fs::create_directories(reports);

    const GeoGraph city = [] {
        CityOptions opt;
        opt.cols = 18;
        opt.rows = 16;
        opt.spacing = 200.0;
        return make_city(31415, opt);
    }();
    const fs::path base = g_work / "ensemble_base.json";
    save_graph_file(city, base.string());

    int made = 0;
    for (int i = 0; i < 50 && c.ok; ++i) {
        const auto& plan = kind_plans()[i % kind_plans().size()];
        const double severity = plan.grid[1 + (i / 6) % (plan.grid.size() - 1)];
        const fs::path pg = g_work / ("ens_gt_" + std::to_string(i) + ".json");
        const fs::path pp = g_work / ("ens_pred_" + std::to_string(i) + ".json");
        std::ostringstream sev;
        sev << severity;
        int code = run_cli("--seed " + std::to_string(1000 + i) + " perturb --in " + base.string() +
                           " --kind " + to_string(plan.kind) + " --severity " + sev.str() +
                           " --out-gt " + pg.string() + " --out-pred " + pp.string() + " " +
                           plan.extra_flags);
        c.expect(code == 0, "ensemble perturb failed at pair " + std::to_string(i));
        if (code != 0) break;
        code = run_cli("--seed " + std::to_string(1000 + i) + " score --gt " + pg.string() +
                       " --pred " + pp.string() + " --metrics all " + sweep_score_flags() +
                       " --out " + (reports / ("r" + std::to_string(i) + ".json")).string());
        c.expect(code == 0, "ensemble score failed at pair " + std::to_string(i));
        if (code != 0) break;
        ++made;
    }
    c.expect(made == 50, "ensemble incomplete");

    const fs::path corr = g_work / "ensemble_correlation.json";
    if (c.ok) {
        const int code =
            run_cli("correlate --reports " + reports.string() + " --out " + corr.string());
        c.expect(code == 0, "correlate failed");
    }

    double new_mean = -2.0;
    double best_existing = -2.0;
    std::string best_existing_names;
    if (c.ok) {
        const json doc = json::parse(slurp(corr));
        const std::set<std::string> new_set{"newp", "newj", "newg"};
        const std::set<std::string> existing{"ccq", "tlts", "apls", "junct", "graph"};
        for (const auto& t : doc["triplets"]) {
            std::set<std::string> names;
            for (const auto& n : t["metrics"]) names.insert(n.get<std::string>());
            if (t["mean"].is_null()) {
                c.expect(false, "triplet with undefined correlation in the ensemble");
                continue;
            }
            const double mean = t["mean"].get<double>();
            if (names == new_set) new_mean = mean;
            bool all_existing = true;
            for (const auto& n : names) all_existing &= existing.count(n) > 0;
            if (all_existing && mean > best_existing) {
                best_existing = mean;
                best_existing_names = *names.begin() + "/" + *std::next(names.begin()) + "/" +
                                      *std::next(names.begin(), 2);
            }
        }
        c.expect(new_mean > -2.0, "new-score triplet missing from the correlation output");
        c.expect(best_existing > -2.0, "legacy triplets missing from the correlation output");
        c.expect(new_mean > best_existing,
                 "new triplet mean " + fmt(new_mean) + " does not beat best legacy triplet " +
                     best_existing_names + " at " + fmt(best_existing));
    }

    verdict(5, c.ok,
            c.ok ? "new triplet mean r " + fmt(new_mean) + " > best legacy triplet " +
                       best_existing_names + " at " + fmt(best_existing)
                 : c.first_failure);
}

// ------------------------------------------------------------ criterion 7 ---

void criterion_7_performance() {
    Check c;
    const GeoGraph g = make_city_sized(777, 1000, 150.0);
    c.expect(g.node_count() >= 900 && g.node_count() <= 1100,
             "performance graph size " + std::to_string(g.node_count()));
    const fs::path gt = g_work / "perf_gt.json";
    save_graph_file(g, gt.string());
    const fs::path pred = g_work / "perf_pred.json";
    const fs::path pred_gt = g_work / "perf_pred_gt.json";
    int code = run_cli("--seed 3 perturb --in " + gt.string() +
                       " --kind node_noise --severity 4 --out-gt " + pred_gt.string() +
                       " --out-pred " + pred.string());
    c.expect(code == 0, "perturb failed");

    const auto t0 = std::chrono::steady_clock::now();
    code = run_cli("--seed 11 score --gt " + gt.string() + " --pred " + pred.string() +
                   " --metrics all --out " + (g_work / "perf_report.json").string());
    const double elapsed = seconds_since(t0);
    c.expect(code == 0, "score failed");
    c.expect(elapsed < 60.0, "scoring took " + fmt(elapsed) + " s (limit 60)");
    verdict(7, c.ok,
            c.ok ? "all metrics on a ~1000-node pair with default parameters in " + fmt(elapsed) +
                       " s"
                 : c.first_failure);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <roadcmp-binary>\n");
        return 2;
    }
    g_binary = argv[1];
    g_work = fs::current_path() / "acceptance_work";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    criterion_1_identity();
    criterion_2_oracles();
    criterion_3_formulas();
    criterion_4_sensitivity_and_6_determinism();
    criterion_5_consistency();
    criterion_7_performance();

    if (g_failures == 0) {
        std::printf("ACCEPTANCE: all criteria passed\n");
        return 0;
    }
    std::printf("ACCEPTANCE: %d criterion(s) failed\n", g_failures);
    return 1;
}
