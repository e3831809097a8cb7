#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadcmp/graph.hpp"

namespace roadcmp {

// Binary raster, row-major, pixel (ix, iy) center at
// origin + ((ix + 0.5) * resolution, (iy + 0.5) * resolution).
struct Mask {
    int width = 0;
    int height = 0;
    Vec2 origin;
    double resolution = 1.0;
    std::vector<std::uint8_t> bits;

    bool get(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y) { bits[static_cast<std::size_t>(y) * width + x] = 1; }
    std::int64_t count() const;
};

struct PixelParams {
    double resolution = 1.0;  // meters per pixel
    int slack = 5;            // Chebyshev tolerance, pixels
};

struct CCQScore {
    double correctness = 0.0;   // relaxed precision
    double completeness = 0.0;  // relaxed recall
    double quality = 0.0;
};

// Sets every pixel whose center lies within resolution/2 of an edge segment,
// plus the pixels containing segment endpoints (keeps strokes 8-connected
// through junctions). Throws std::invalid_argument if a node falls outside
// the extent.
Mask rasterize(const GeoGraph& g, double resolution, const BBox& extent);

// Chebyshev-relaxed correctness / completeness / quality. Empty denominators
// score 0.
CCQScore ccq(const Mask& gt, const Mask& pred, int slack);

// Chebyshev dilation by `slack` pixels (square structuring element).
Mask dilate(const Mask& m, int slack);

// 8-bit grayscale PNG (0 background / 255 foreground), for visual debugging.
void write_mask_png(const Mask& m, const std::string& path);

}  // namespace roadcmp
