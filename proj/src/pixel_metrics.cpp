#include "roadcmp/pixel_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#ifdef ROADCMP_HAVE_PNG
#include <png.h>

#include <cstdio>
#include <memory>
#endif

namespace roadcmp {

std::int64_t Mask::count() const {
    std::int64_t n = 0;
    for (const auto b : bits) n += b;
    return n;
}

Mask rasterize(const GeoGraph& g, double resolution, const BBox& extent) {
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
    if (extent.empty()) throw std::invalid_argument("empty raster extent");
    for (const auto& n : g.nodes()) {
        if (!extent.contains(n.pos))
            throw std::invalid_argument("node " + std::to_string(n.id) + " outside raster extent");
    }

    Mask m;
    m.origin = {extent.min_x, extent.min_y};
    m.resolution = resolution;
    m.width = std::max(1, static_cast<int>(std::ceil(extent.width() / resolution)));
    m.height = std::max(1, static_cast<int>(std::ceil(extent.height() / resolution)));
    m.bits.assign(static_cast<std::size_t>(m.width) * m.height, 0);
    if (g.edge_count() == 0) return m;

    const double half = resolution * 0.5;

    // bucket edges by the rows their inflated bounding box covers, so rows
    // can be filled independently
    std::vector<std::vector<EdgeId>> rows(static_cast<std::size_t>(m.height));
    for (std::size_t ei = 0; ei < g.edge_count(); ++ei) {
        const auto& e = g.edge(static_cast<EdgeId>(ei));
        const double y0 = std::min(g.pos(e.a).y, g.pos(e.b).y) - half;
        const double y1 = std::max(g.pos(e.a).y, g.pos(e.b).y) + half;
        const int r0 = std::clamp(static_cast<int>(std::floor((y0 - m.origin.y) / resolution)), 0,
                                  m.height - 1);
        const int r1 = std::clamp(static_cast<int>(std::floor((y1 - m.origin.y) / resolution)), 0,
                                  m.height - 1);
        for (int r = r0; r <= r1; ++r) rows[static_cast<std::size_t>(r)].push_back(static_cast<EdgeId>(ei));
    }

#pragma omp parallel for schedule(dynamic, 16)
    for (int y = 0; y < m.height; ++y) {
        const double cy = m.origin.y + (y + 0.5) * resolution;
        for (const EdgeId ei : rows[static_cast<std::size_t>(y)]) {
            const auto& e = g.edge(ei);
            const Vec2 a = g.pos(e.a), b = g.pos(e.b);
            const double x0 = std::min(a.x, b.x) - half;
            const double x1 = std::max(a.x, b.x) + half;
            const int c0 = std::clamp(static_cast<int>(std::floor((x0 - m.origin.x) / resolution)),
                                      0, m.width - 1);
            const int c1 = std::clamp(static_cast<int>(std::floor((x1 - m.origin.x) / resolution)),
                                      0, m.width - 1);
            for (int x = c0; x <= c1; ++x) {
                const Vec2 center{m.origin.x + (x + 0.5) * resolution, cy};
                if (point_segment_distance(a, b, center) <= half) m.set(x, y);
            }
        }
    }

    // segment-end pixels close junction gaps the distance test may leave
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) == 0) continue;
        const Vec2 p = g.pos(v);
        const int x = std::clamp(static_cast<int>(std::floor((p.x - m.origin.x) / resolution)), 0,
                                 m.width - 1);
        const int y = std::clamp(static_cast<int>(std::floor((p.y - m.origin.y) / resolution)), 0,
                                 m.height - 1);
        m.set(x, y);
    }
    return m;
}

Mask dilate(const Mask& m, int slack) {
    if (slack <= 0) return m;
    Mask tmp = m;
    // horizontal pass via prefix sums per row
#pragma omp parallel for schedule(static)
    for (int y = 0; y < m.height; ++y) {
        std::vector<std::int32_t> prefix(static_cast<std::size_t>(m.width) + 1, 0);
        for (int x = 0; x < m.width; ++x)
            prefix[x + 1] = prefix[x] + (m.get(x, y) ? 1 : 0);
        for (int x = 0; x < m.width; ++x) {
            const int lo = std::max(0, x - slack);
            const int hi = std::min(m.width - 1, x + slack);
            tmp.bits[static_cast<std::size_t>(y) * m.width + x] =
                (prefix[hi + 1] - prefix[lo]) > 0 ? 1 : 0;
        }
    }
    Mask out = tmp;
#pragma omp parallel for schedule(static)
    for (int x = 0; x < m.width; ++x) {
        std::vector<std::int32_t> prefix(static_cast<std::size_t>(m.height) + 1, 0);
        for (int y = 0; y < m.height; ++y)
            prefix[y + 1] = prefix[y] + (tmp.get(x, y) ? 1 : 0);
        for (int y = 0; y < m.height; ++y) {
            const int lo = std::max(0, y - slack);
            const int hi = std::min(m.height - 1, y + slack);
            out.bits[static_cast<std::size_t>(y) * m.width + x] =
                (prefix[hi + 1] - prefix[lo]) > 0 ? 1 : 0;
        }
    }
    return out;
}

CCQScore ccq(const Mask& gt, const Mask& pred, int slack) {
    if (gt.width != pred.width || gt.height != pred.height)
        throw std::invalid_argument("mask shapes differ");
    if (gt.resolution != pred.resolution)
        throw std::invalid_argument("mask resolutions differ");
    if (slack < 0) throw std::invalid_argument("slack must be >= 0");

    const Mask gt_dil = dilate(gt, slack);
    const Mask pred_dil = dilate(pred, slack);

    const std::size_t n = gt.bits.size();
    std::int64_t pred_total = 0, gt_total = 0, tp_rel = 0, gt_matched = 0;
#pragma omp parallel for schedule(static) reduction(+ : pred_total, gt_total, tp_rel, gt_matched)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
        const bool p = pred.bits[i] != 0;
        const bool t = gt.bits[i] != 0;
        pred_total += p;
        gt_total += t;
        tp_rel += p && gt_dil.bits[i] != 0;
        gt_matched += t && pred_dil.bits[i] != 0;
    }

    const std::int64_t fp = pred_total - tp_rel;
    const std::int64_t fn = gt_total - gt_matched;
    CCQScore s;
    s.correctness = pred_total > 0 ? static_cast<double>(tp_rel) / pred_total : 0.0;
    s.completeness = gt_total > 0 ? static_cast<double>(gt_matched) / gt_total : 0.0;
    const std::int64_t denom = tp_rel + fp + fn;
    s.quality = denom > 0 ? static_cast<double>(tp_rel) / denom : 0.0;
    return s;
}

#ifdef ROADCMP_HAVE_PNG
void write_mask_png(const Mask& m, const std::string& path) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot write " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("libpng failure while writing " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(m.width), static_cast<png_uint_32>(m.height),
                 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<png_byte> row(static_cast<std::size_t>(m.width));
    for (int y = m.height - 1; y >= 0; --y) {  // image rows top-down
        for (int x = 0; x < m.width; ++x) row[x] = m.get(x, y) ? 255 : 0;
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}
#else
void write_mask_png(const Mask&, const std::string&) {
    throw std::runtime_error("PNG support not compiled in");
}
#endif

}  // namespace roadcmp
