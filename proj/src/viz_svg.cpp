#include "mhviz/viz_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mhviz/errors.hpp"

namespace mhviz {

namespace {

constexpr double kMarginLeft = 56.0;
constexpr double kMarginBottom = 48.0;
constexpr double kMarginTop = 16.0;
constexpr double kMarginRight = 16.0;
constexpr double kPanelPadding = 0.12;

// Fixed 4-decimal serialization; never emits "-0.0000".
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s(buf);
    if (s == "-0.0000") s = "0.0000";
    return s;
}

std::string escape(const std::string& raw) {
    std::string out;
    for (char c : raw) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

double cell_side(const VizSpec& spec) {
    const double plot = spec.style.canvas_px - kMarginLeft - kMarginRight;
    return plot / static_cast<double>(spec.levels.size());
}

double plot_height(const VizSpec& spec) { return spec.style.canvas_px - kMarginTop - kMarginBottom; }

double cell_height(const VizSpec& spec) { return plot_height(spec) / static_cast<double>(spec.levels.size()); }

void line(std::string& out, std::pair<double, double> a, std::pair<double, double> b, const std::string& stroke,
          const std::string& extra) {
    out += "<line x1=\"" + num(a.first) + "\" y1=\"" + num(a.second) + "\" x2=\"" + num(b.first) + "\" y2=\"" +
           num(b.second) + "\" stroke=\"" + escape(stroke) + "\"" + extra + "/>\n";
}

void text(std::string& out, double x, double y, const std::string& anchor, double size, const std::string& body,
          const std::string& extra = "") {
    out += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" text-anchor=\"" + anchor + "\" font-size=\"" + num(size) +
           "\"" + extra + ">" + escape(body) + "</text>\n";
}

}  // namespace

const char* to_string(PointColor c) noexcept { return c == PointColor::Red ? "red" : "blue"; }

std::string format_label(double value) {
    const double rounded = std::floor(value * 1000.0 + 0.5) / 1000.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", rounded);
    std::string s(buf);
    if (s == "-0.000") s = "0.000";
    return s;
}

VizSpec build_viz_spec(const MarginalSummary& s, const std::vector<std::optional<SubMeasure>>& subs,
                       const VizStyle& style) {
    if (subs.size() != s.levels.size()) {
        throw InputError(InputError::Kind::BadArgument, "one sub-measure entry per level is required");
    }
    VizSpec spec;
    spec.dim = s.dim;
    spec.style = style;
    for (std::size_t k = 0; k < subs.size(); ++k) {
        VizLevel v;
        v.level = s.levels[k].level;
        if (subs[k]) {
            const SubMeasure& m = *subs[k];
            v.defined = true;
            v.x = m.gc1;
            v.y = m.gc2;
            v.size = m.weight;
            v.gamma = m.gamma;
            v.label = format_label(m.gamma);
            v.color = m.gc1 < m.gc2 ? PointColor::Red : PointColor::Blue;
        } else {
            v.label = "n/a";
        }
        spec.levels.push_back(std::move(v));
    }
    return spec;
}

PanelBox panel_box(const VizSpec& spec, std::size_t level) {
    const double w = cell_side(spec);
    const double h = cell_height(spec);
    const double k = static_cast<double>(spec.levels.size());
    const double col = static_cast<double>(level - 1);
    const double cell_left = kMarginLeft + col * w;
    // level 1 in the bottom row
    const double cell_top = kMarginTop + (k - static_cast<double>(level)) * h;
    const double side = std::min(w, h) * (1.0 - 2.0 * kPanelPadding);
    return {cell_left + (w - side) / 2.0, cell_top + (h - side) / 2.0, side};
}

double point_radius(const VizSpec& spec, std::size_t level) {
    double largest = 0.0;
    for (const auto& v : spec.levels)
        if (v.defined) largest = std::max(largest, v.size);
    const VizLevel& v = spec.levels.at(level - 1);
    if (!v.defined || !(largest > 0.0)) return 0.0;
    return spec.style.point_max_radius * std::sqrt(v.size / largest);
}

std::string render_svg(const VizSpec& spec) {
    const VizStyle& st = spec.style;
    if (!(st.canvas_px > kMarginLeft + kMarginRight + 1.0) || !(st.canvas_px > kMarginTop + kMarginBottom + 1.0)) {
        throw InputError(InputError::Kind::BadArgument, "canvas is too small");
    }
    if (spec.levels.empty()) throw InputError(InputError::Kind::BadArgument, "nothing to draw");

    const std::size_t k = spec.levels.size();
    const std::string size = num(st.canvas_px);
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + size + "\" height=\"" + size +
           "\" viewBox=\"0 0 " + size + " " + size + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + size + "\" height=\"" + size + "\" fill=\"#ffffff\"/>\n";

    // grid of level cells
    const double w = cell_side(spec);
    const double h = cell_height(spec);
    out += "<g id=\"grid\" fill=\"none\" stroke=\"#d0d0d0\" stroke-width=\"1\">\n";
    for (std::size_t row = 0; row < k; ++row) {
        for (std::size_t col = 0; col < k; ++col) {
            out += "<rect x=\"" + num(kMarginLeft + static_cast<double>(col) * w) + "\" y=\"" +
                   num(kMarginTop + static_cast<double>(row) * h) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
                   "\"/>\n";
        }
    }
    out += "</g>\n";

    // axes: horizontal indexes levels for Gc1, vertical for Gc2
    out += "<g id=\"axes\" fill=\"#000000\">\n";
    const double axis_y = kMarginTop + plot_height(spec);
    for (std::size_t level = 1; level <= k; ++level) {
        const double cx = kMarginLeft + (static_cast<double>(level) - 0.5) * w;
        const double cy = kMarginTop + (static_cast<double>(k - level) + 0.5) * h;
        text(out, cx, axis_y + st.font_size + 4.0, "middle", st.font_size, std::to_string(level));
        text(out, kMarginLeft - 8.0, cy + st.font_size / 3.0, "end", st.font_size, std::to_string(level));
    }
    text(out, kMarginLeft + k * w / 2.0, st.canvas_px - 8.0, "middle", st.font_size, "Gc1 (level i)");
    const double ty = kMarginTop + plot_height(spec) / 2.0;
    text(out, 16.0, ty, "middle", st.font_size, "Gc2 (level i)",
         " transform=\"rotate(-90 " + num(16.0) + " " + num(ty) + ")\"");
    out += "</g>\n";

    for (const auto& v : spec.levels) {
        const PanelBox box = panel_box(spec, v.level);
        out += "<g id=\"level-" + std::to_string(v.level) + "\">\n";
        out += "<rect x=\"" + num(box.left) + "\" y=\"" + num(box.top) + "\" width=\"" + num(box.side) +
               "\" height=\"" + num(box.side) + "\" fill=\"none\" stroke=\"#808080\" stroke-width=\"1\"/>\n";
        if (!v.defined) {
            const auto c = box.to_pixels(0.5, 0.5);
            text(out, c.first, c.second + st.font_size / 3.0, "middle", st.font_size, "n/a", " class=\"undefined\"");
            out += "</g>\n";
            continue;
        }
        const std::string dash = " stroke-width=\"1.5\" stroke-dasharray=\"" + escape(st.dash) + "\"";
        line(out, box.to_pixels(0.0, 1.0), box.to_pixels(0.5, 0.5), st.red, dash + " class=\"locus red\"");
        line(out, box.to_pixels(0.5, 0.5), box.to_pixels(1.0, 0.0), st.blue, dash + " class=\"locus blue\"");

        const auto p = box.to_pixels(v.x, v.y);
        const double radius = point_radius(spec, v.level);
        const std::string& fill = v.color == PointColor::Red ? st.red : st.blue;
        out += "<circle id=\"point-" + std::to_string(v.level) + "\" class=\"point " + to_string(v.color) + "\" cx=\"" +
               num(p.first) + "\" cy=\"" + num(p.second) + "\" r=\"" + num(radius) + "\" fill=\"" + escape(fill) +
               "\" fill-opacity=\"0.8\"/>\n";

        // keep the label inside the panel: on the side facing the centre
        const double gap = radius + 4.0;
        const bool right = v.x <= 0.5;
        const double lx = p.first + (right ? gap : -gap);
        const double ly = v.y > 0.5 ? p.second + gap + st.font_size * 0.7 : p.second - gap;
        text(out, lx, ly, right ? "start" : "end", st.font_size, v.label, " class=\"label\"");
        out += "</g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace mhviz
