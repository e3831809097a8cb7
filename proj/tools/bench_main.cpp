#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "roadcmp/graph_ops.hpp"
#include "roadcmp/path_metrics.hpp"
#include "roadcmp/perturb.hpp"
#include "roadcmp/pixel_metrics.hpp"
#include "roadcmp/reference.hpp"
#include "roadcmp/rng.hpp"
#include "roadcmp/spatial_index.hpp"
#include "roadcmp/subgraph_metrics.hpp"
#include "roadcmp/synthetic.hpp"

using namespace roadcmp;

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial_ms, double fast_ms, bool same) {
    std::printf("%-28s %10.2f ms %10.2f ms %8.2fx  %s\n", name, serial_ms, fast_ms,
                serial_ms / fast_ms, same ? "outputs match" : "OUTPUTS DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--threads") threads = std::atoi(argv[i + 1]);
    }
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::printf("openmp: yes, max threads %d\n", omp_get_max_threads());
#else
    (void)threads;
    std::printf("openmp: no (serial build)\n");
#endif

    const GeoGraph gt = make_city_sized(7, 900, 150.0);
    const auto pair = make_pair(gt, {PerturbKind::node_noise, 6.0, 11});
    const GeoGraph& pred = pair.pred;
    std::printf("benchmark pair: %zu/%zu nodes, %zu/%zu edges\n\n", gt.node_count(),
                pred.node_count(), gt.edge_count(), pred.edge_count());
    std::printf("%-28s %13s %13s %9s\n", "kernel", "reference", "optimized", "speedup");

    {  // nearest-segment projection: linear scan vs grid index
        Rng rng(42);
        const BBox b = gt.bounds();
        std::vector<Vec2> queries(20000);
        for (auto& q : queries) {
            q = {rng.uniform(b.min_x, b.max_x), rng.uniform(b.min_y, b.max_y)};
        }
        std::vector<double> ref_d(queries.size()), fast_d(queries.size());
        const double serial = time_ms([&] {
            for (std::size_t i = 0; i < queries.size(); ++i)
                ref_d[i] = reference::project_point(gt, queries[i]).dist;
        });
        const SegmentGrid grid(gt, 25.0);
        const double fast = time_ms([&] {
            for (std::size_t i = 0; i < queries.size(); ++i)
                fast_d[i] = project_point(gt, grid, queries[i]).dist;
        });
        report("project_point", serial, fast, ref_d == fast_d);
    }

    {  // relaxed pixel scores: per-pixel scan vs separable dilation
        BBox extent = gt.bounds();
        extent.expand(pred.bounds());
        extent.inflate(8.0);
        const Mask mg = rasterize(gt, 2.0, extent);
        const Mask mp = rasterize(pred, 2.0, extent);
        CCQScore ref_s, fast_s;
        const double serial = time_ms([&] { ref_s = reference::ccq(mg, mp, 3); }, 1);
        const double fast = time_ms([&] { fast_s = ccq(mg, mp, 3); });
        const bool same = ref_s.correctness == fast_s.correctness &&
                          ref_s.completeness == fast_s.completeness &&
                          ref_s.quality == fast_s.quality;
        report("ccq", serial, fast, same);
    }

    {  // sampled path statistics: 1 thread vs configured team
        PathParams pp;
        pp.n_pairs = 400;
        double a1 = 0.0, an = 0.0;
        double serial = 0.0, fast = 0.0;
#ifdef _OPENMP
        const int before = omp_get_max_threads();
        omp_set_num_threads(1);
        serial = time_ms([&] { a1 = apls(gt, pred, pp); });
        omp_set_num_threads(before);
        fast = time_ms([&] { an = apls(gt, pred, pp); });
#else
        serial = fast = time_ms([&] { a1 = an = apls(gt, pred, pp); });
#endif
        report("apls (400 pairs)", serial, fast, a1 == an);
    }

    {  // subgraph control-point matching: 1 thread vs configured team
        SubgraphParams sp;
        sp.n_starts = 200;
        SubgraphScore s1, sn;
        double serial = 0.0, fast = 0.0;
#ifdef _OPENMP
        const int before = omp_get_max_threads();
        omp_set_num_threads(1);
        serial = time_ms([&] { s1 = newg(gt, pred, sp); });
        omp_set_num_threads(before);
        fast = time_ms([&] { sn = newg(gt, pred, sp); });
#else
        serial = fast = time_ms([&] { s1 = sn = newg(gt, pred, sp); });
#endif
        const bool same = s1.tp == sn.tp && s1.pp == sn.pp && s1.ap == sn.ap;
        report("newg (200 starts)", serial, fast, same);
    }

    return 0;
}
