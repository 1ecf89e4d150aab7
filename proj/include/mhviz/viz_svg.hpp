#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhviz/measures.hpp"
#include "mhviz/table.hpp"

namespace mhviz {

enum class PointColor { Red, Blue };

const char* to_string(PointColor c) noexcept;

// One sub-measure panel. x = Gc1, y = Gc2, size = weight.
struct VizLevel {
    std::size_t level = 0;
    double x = 0.0;
    double y = 0.0;
    double size = 0.0;
    double gamma = 0.0;
    std::string label;  // gamma, 3 decimals, half-up
    PointColor color = PointColor::Blue;
    bool defined = false;
};

struct VizStyle {
    double canvas_px = 640.0;
    double point_max_radius = 18.0;
    double font_size = 12.0;
    std::string red = "#d62728";
    std::string blue = "#1f77b4";
    std::string dash = "6,4";
};

struct VizSpec {
    std::size_t dim = 0;  // table dimension r; there are r - 1 levels
    std::vector<VizLevel> levels;
    VizStyle style;
};

// Pixel box of a diagonal panel's unit square (after padding).
struct PanelBox {
    double left = 0.0;
    double top = 0.0;
    double side = 0.0;

    // (Gc1, Gc2) in [0, 1]^2 -> pixel coordinates, y pointing up inside the panel.
    std::pair<double, double> to_pixels(double x, double y) const { return {left + x * side, top + (1.0 - y) * side}; }
};

// Half-up rounding to 3 decimals, e.g. 0.1875 -> "0.188".
std::string format_label(double value);

// Throws InputError when subs does not have one entry per level.
VizSpec build_viz_spec(const MarginalSummary& s, const std::vector<std::optional<SubMeasure>>& subs,
                       const VizStyle& style = {});

PanelBox panel_box(const VizSpec& spec, std::size_t level);

// Radius in pixels: max radius * sqrt(size / largest defined size).
double point_radius(const VizSpec& spec, std::size_t level);

// SVG 1.1 document. Byte-identical output for identical specs. Throws InputError on a non-positive canvas.
std::string render_svg(const VizSpec& spec);

}  // namespace mhviz
