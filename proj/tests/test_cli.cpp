#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "roadcmp/graph_io.hpp"
#include "roadcmp/stats.hpp"
#include "roadcmp/synthetic.hpp"
#include "support/schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string g_binary;
std::string g_schemas;
fs::path g_work;

int run(const std::string& args) {
    const std::string cmd = g_binary + " " + args;
    const int status = std::system(cmd.c_str());
    return status < 0 ? status : (status >> 8) & 0xff;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_json(const fs::path& p) { return json::parse(slurp(p)); }

schemacheck::Validator load_schema(const std::string& name) {
    return schemacheck::Validator(load_json(fs::path(g_schemas) / name));
}

std::string quiet() { return " 2> " + (g_work / "stderr.txt").string(); }

}  // namespace

TEST_CASE("pearson and spearman behave on the degenerate inputs") {
    using roadcmp::pearson;
    using roadcmp::spearman;
    CHECK(*pearson({1, 2, 3}, {1, 2, 3}) == 1.0);
    CHECK(*pearson({1, 2, 3}, {3, 2, 1}) == -1.0);
    CHECK(!pearson({1, 1, 1}, {1, 2, 3}).has_value());
    CHECK(*spearman({1, 2, 3, 4, 5}, {10, 20, 40, 30, 50}) > 0.8);
    CHECK(*spearman({1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}) == -1.0);
}

TEST_CASE("score on an identical pair is perfect, deterministic and schema-valid") {
    const auto g = roadcmp::make_city_sized(31, 150, 120.0);
    const auto graph_path = g_work / "identity.json";
    roadcmp::save_graph_file(g, graph_path.string());

    const auto report_path = g_work / "report_a.json";
    const std::string base = "score --gt " + graph_path.string() + " --pred " +
                             graph_path.string() + " --metrics all --n-pairs 40 --n-starts 40 " +
                             "--resolution 2 --seed 7";
    REQUIRE(run(base + " --out " + report_path.string() + quiet()) == 0);

    const json report = load_json(report_path);
    std::vector<std::string> errors;
    CHECK(load_schema("score_report.schema.json").validate(report, errors));
    for (const auto& e : errors) MESSAGE(e);

    CHECK(report["summary"]["ccq"].get<double>() == 1.0);
    CHECK(report["summary"]["apls"].get<double>() == 1.0);
    CHECK(report["summary"]["tlts"].get<double>() == 1.0);
    CHECK(report["summary"]["junct"].get<double>() == 1.0);
    CHECK(report["summary"]["newp"].get<double>() == 1.0);
    CHECK(report["summary"]["newj"].get<double>() == 1.0);
    CHECK(report["summary"]["newg"].get<double>() == 1.0);
    CHECK(report["summary"]["graph"].get<double>() == 1.0);

    // byte-identical across repeat runs and thread counts
    const auto report_b = g_work / "report_b.json";
    const auto report_c = g_work / "report_c.json";
    REQUIRE(run(base + " --threads 1 --out " + report_b.string() + quiet()) == 0);
    REQUIRE(run(base + " --threads 2 --out " + report_c.string() + quiet()) == 0);
    CHECK(slurp(report_b) == slurp(report_c));
    CHECK(slurp(report_path) == slurp(report_b));
}

TEST_CASE("input problems exit with code 2") {
    CHECK(run("score --gt missing.json --pred missing.json" + quiet()) == 2);

    const auto g = roadcmp::make_city_sized(3, 60, 120.0);
    const auto p = g_work / "ok.json";
    roadcmp::save_graph_file(g, p.string());
    CHECK(run("score --gt " + p.string() + " --pred " + p.string() + " --metrics bogus" + quiet()) ==
          2);
    CHECK(run("correlate --reports " + (g_work / "no_reports").string() + quiet()) == 2);
}

TEST_CASE("metric failures produce a partial report and exit code 3") {
    const auto tiny = g_work / "tiny.json";
    {
        std::ofstream out(tiny);
        out << R"({"nodes":[{"id":0,"x":0,"y":0}],"edges":[]})";
    }
    const auto report_path = g_work / "partial.json";
    const int code = run("score --gt " + tiny.string() + " --pred " + tiny.string() +
                         " --metrics all --out " + report_path.string() + quiet());
    CHECK(code == 3);
    const json report = load_json(report_path);
    CHECK(report.contains("errors"));
    CHECK(report["errors"].contains("tlts"));
    CHECK(report["metrics"].contains("ccq"));  // the others still ran
}

TEST_CASE("perturb at severity zero reproduces the input and writes a manifest") {
    const auto g = roadcmp::make_city_sized(5, 100, 120.0);
    const auto in = g_work / "in.json";
    roadcmp::save_graph_file(g, in.string());
    const auto out_gt = g_work / "p_gt.json";
    const auto out_pred = g_work / "p_pred.json";
    const auto manifest = g_work / "manifest.json";
    REQUIRE(run("perturb --in " + in.string() + " --kind doubled_pred --severity 0 --out-gt " +
                out_gt.string() + " --out-pred " + out_pred.string() + " --manifest " +
                manifest.string() + " > /dev/null" + quiet()) == 0);
    CHECK(slurp(out_gt) == slurp(in));
    CHECK(slurp(out_pred) == slurp(in));
    const json m = load_json(manifest);
    CHECK(m["achieved"].get<double>() == 0.0);
    CHECK(m["seed"].get<std::uint64_t>() == 0);
    CHECK(m["perturb_kind"] == "doubled_pred");
}

TEST_CASE("perturb interruptions split the prediction into more components") {
    const auto g = roadcmp::make_city_sized(6, 150, 200.0);
    const auto in = g_work / "in2.json";
    roadcmp::save_graph_file(g, in.string());
    const auto out_gt = g_work / "i_gt.json";
    const auto out_pred = g_work / "i_pred.json";
    const auto manifest = g_work / "i_manifest.json";
    REQUIRE(run("perturb --in " + in.string() +
                " --kind interruptions --severity 20 --seed 5 --out-gt " + out_gt.string() +
                " --out-pred " + out_pred.string() + " --manifest " + manifest.string() +
                " > /dev/null" + quiet()) == 0);
    const json m = load_json(manifest);
    const int achieved = static_cast<int>(m["achieved"].get<double>());
    CHECK(achieved >= 1);

    auto count_components = [](const roadcmp::GeoGraph& gr) {
        const auto comp = gr.components();
        int n = 0;
        for (const auto c : comp) n = std::max(n, c + 1);
        return n;
    };
    const auto before = roadcmp::load_graph_file(in.string());
    const auto after = roadcmp::load_graph_file(out_pred.string());
    CHECK(count_components(after.graph) >= count_components(before.graph) + achieved);
}

TEST_CASE("a severity sweep writes plot-ready JSON and CSV") {
    const auto g = roadcmp::make_city_sized(9, 120, 150.0);
    const auto in = g_work / "sweep_in.json";
    roadcmp::save_graph_file(g, in.string());
    const auto out_dir = g_work / "sweep_out";
    REQUIRE(run("sweep --in " + in.string() +
                " --kind overconnections --grid 0,6 --n-seeds 2 --out " + out_dir.string() +
                " --n-pairs 30 --n-starts 30 --travel 150 --resolution 2 --seed 3" + quiet()) == 0);

    const json doc = load_json(out_dir / "sweep.json");
    std::vector<std::string> errors;
    CHECK(load_schema("sweep_result.schema.json").validate(doc, errors));
    for (const auto& e : errors) MESSAGE(e);

    // the zero-severity column is perfect for every metric
    const auto& curves = doc["curves"];
    for (const auto& metric : {"apls", "tlts", "newp", "newj", "newg", "graph", "junct", "ccq"}) {
        REQUIRE(curves.contains(metric));
    }
    CHECK(curves["apls"]["score"][0].get<double>() == 1.0);
    CHECK(curves["newp"]["f1"][0].get<double>() == 1.0);
    CHECK(curves["newg"]["f1"][0].get<double>() == 1.0);
    CHECK(curves["ccq"]["quality"][0].get<double>() == 1.0);

    CHECK(fs::exists(out_dir / "curves.csv"));
    CHECK(fs::exists(out_dir / "curve_newp.csv"));
    const std::string csv = slurp(out_dir / "curves.csv");
    CHECK(csv.rfind("severity,seed,metric,component,value", 0) == 0);
}

TEST_CASE("correlate reports unit diagonals and flags degenerate series") {
    const auto g = roadcmp::make_city_sized(12, 120, 150.0);
    const auto in = g_work / "corr_in.json";
    roadcmp::save_graph_file(g, in.string());

    // degenerate: five byte-identical reports
    const auto dup_dir = g_work / "dup_reports";
    fs::create_directories(dup_dir);
    const auto first = dup_dir / "r0.json";
    REQUIRE(run("score --gt " + in.string() + " --pred " + in.string() +
                " --n-pairs 30 --n-starts 30 --resolution 2 --out " + first.string() + quiet()) ==
            0);
    for (int i = 1; i < 5; ++i) fs::copy_file(first, dup_dir / ("r" + std::to_string(i) + ".json"));
    const auto dup_out = g_work / "dup_corr.json";
    REQUIRE(run("correlate --reports " + dup_dir.string() + " --out " + dup_out.string() +
                quiet()) == 0);
    const json dup = load_json(dup_out);
    CHECK(dup["pearson"][0][1].is_null());

    // varied severities give defined correlations
    const auto var_dir = g_work / "var_reports";
    fs::create_directories(var_dir);
    int idx = 0;
    for (const double severity : {4.0, 10.0, 16.0, 22.0}) {
        const auto pg = g_work / ("vg" + std::to_string(idx) + ".json");
        const auto pp = g_work / ("vp" + std::to_string(idx) + ".json");
        REQUIRE(run("perturb --in " + in.string() + " --kind interruptions --severity " +
                    std::to_string(severity) + " --seed " + std::to_string(idx) + " --out-gt " +
                    pg.string() + " --out-pred " + pp.string() + " > /dev/null" + quiet()) == 0);
        REQUIRE(run("score --gt " + pg.string() + " --pred " + pp.string() +
                    " --n-pairs 30 --n-starts 30 --resolution 2 --out " +
                    (var_dir / ("r" + std::to_string(idx) + ".json")).string() + quiet()) == 0);
        ++idx;
    }
    const auto var_out = g_work / "var_corr.json";
    REQUIRE(run("correlate --reports " + var_dir.string() + " --out " + var_out.string() +
                quiet()) == 0);
    const json var = load_json(var_out);
    std::vector<std::string> errors;
    CHECK(load_schema("correlation.schema.json").validate(var, errors));
    for (const auto& e : errors) MESSAGE(e);
    const auto& m = var["pearson"];
    const std::size_t k = var["metrics"].size();
    for (std::size_t i = 0; i < k; ++i) {
        CHECK(m[i][i].get<double>() == 1.0);
        for (std::size_t j = 0; j < k; ++j) {
            if (m[i][j].is_null()) {
                CHECK(m[j][i].is_null());
            } else {
                CHECK(m[i][j] == m[j][i]);
            }
        }
    }
    CHECK(var["triplets"].size() == 56);  // C(8,3)
}

TEST_CASE("json config files feed defaults that flags override") {
    const auto g = roadcmp::make_city_sized(15, 80, 120.0);
    const auto in = g_work / "cfg_in.json";
    roadcmp::save_graph_file(g, in.string());
    const auto cfg = g_work / "config.json";
    {
        std::ofstream out(cfg);
        out << R"({"seed": 9, "score": {"n-pairs": 25, "n-starts": 25, "resolution": 2}})";
    }
    const auto r1 = g_work / "cfg_r1.json";
    const auto r2 = g_work / "cfg_r2.json";
    REQUIRE(run("--config " + cfg.string() + " score --gt " + in.string() + " --pred " +
                in.string() + " --out " + r1.string() + quiet()) == 0);
    const json a = load_json(r1);
    CHECK(a["seed"].get<int>() == 9);
    CHECK(a["params"]["path"]["n_pairs"].get<int>() == 25);
    // a flag beats the config value
    REQUIRE(run("--config " + cfg.string() + " --seed 4 score --gt " + in.string() + " --pred " +
                in.string() + " --out " + r2.string() + quiet()) == 0);
    CHECK(load_json(r2)["seed"].get<int>() == 4);
}

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: test_cli <roadcmp-binary> <schemas-dir>\n");
        return 2;
    }
    g_binary = argv[1];
    g_schemas = argv[2];
    g_work = fs::current_path() / "test_cli_work";
    fs::remove_all(g_work);
    fs::create_directories(g_work);

    doctest::Context context;
    context.applyCommandLine(1, argv);
    return context.run();
}
