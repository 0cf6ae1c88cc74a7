#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "gmmrec/errors.hpp"
#include "gmmrec/format.hpp"
#include "gmmrec/io.hpp"

namespace gmmrec {
namespace {

struct Stop {
    double at;
    Rgb color;
};

constexpr std::array<Stop, 5> kSequential{{{0.00, {0x44, 0x01, 0x54}},
                                           {0.25, {0x3b, 0x52, 0x8b}},
                                           {0.50, {0x21, 0x91, 0x8c}},
                                           {0.75, {0x5e, 0xc9, 0x62}},
                                           {1.00, {0xfd, 0xe7, 0x25}}}};

constexpr std::array<Stop, 3> kDiverging{{{-1.0, {0x21, 0x66, 0xac}}, {0.0, {0xff, 0xff, 0xff}}, {1.0, {0xb2, 0x18, 0x2b}}}};

template <std::size_t N>
Rgb interpolate(const std::array<Stop, N>& stops, double u) {
    u = std::clamp(u, stops.front().at, stops.back().at);
    for (std::size_t i = 1; i < N; ++i) {
        if (u <= stops[i].at) {
            const double t = (u - stops[i - 1].at) / (stops[i].at - stops[i - 1].at);
            auto mix = [t](int lo, int hi) { return static_cast<int>(std::lround(lo + t * (hi - lo))); };
            return {mix(stops[i - 1].color.r, stops[i].color.r), mix(stops[i - 1].color.g, stops[i].color.g),
                    mix(stops[i - 1].color.b, stops[i].color.b)};
        }
    }
    return stops.back().color;
}

// Fractional grid index of value v (piecewise linear between grid points).
double grid_position(const std::vector<double>& grid, double v) {
    if (grid.size() == 1) return 0.0;
    if (v <= grid.front()) return (v - grid.front()) / (grid[1] - grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (v <= grid[i]) return static_cast<double>(i - 1) + (v - grid[i - 1]) / (grid[i] - grid[i - 1]);
    const std::size_t last = grid.size() - 1;
    return static_cast<double>(last) + (v - grid[last]) / (grid[last] - grid[last - 1]);
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
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

}  // namespace

Rgb sequential_color(double success_rate) {
    const double y = success_transform(std::clamp(success_rate, 0.0, 1.0));
    return interpolate(kSequential, (y - 0.001) / 0.999);
}

Rgb diverging_color(double difference) {
    return interpolate(kDiverging, difference);
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

std::optional<std::pair<std::pair<double, double>, std::pair<double, double>>> threshold_segment(
    const std::vector<double>& a_grid, const std::vector<double>& b_grid) {
    if (a_grid.empty() || b_grid.empty()) return std::nullopt;
    const double b_lo = std::max(b_grid.front(), (a_grid.front() - 1.0) / 2.0);
    const double b_hi = std::min(b_grid.back(), (a_grid.back() - 1.0) / 2.0);
    if (b_lo > b_hi) return std::nullopt;
    return std::make_pair(std::make_pair(b_lo, threshold_a(b_lo)), std::make_pair(b_hi, threshold_a(b_hi)));
}

std::string heatmap_svg(const HeatMap& map, HeatmapKind kind, bool overlay_threshold, const std::string& title) {
    const std::size_t na = map.a_grid.size();
    const std::size_t nb = map.b_grid.size();
    if (na == 0 || nb == 0 || map.values.rows() != na || map.values.cols() != nb)
        throw DimensionError("heatmap_svg: values do not match the grid");

    const double left = 70.0, top = 40.0, plot_w = 600.0, plot_h = 600.0;
    const double width = left + plot_w + 30.0;
    const double height = top + plot_h + 60.0;
    const double cw = plot_w / static_cast<double>(nb);
    const double ch = plot_h / static_cast<double>(na);

    // a grows upward: row a_index sits at the bottom for a_index = 0.
    auto x_of = [&](double b) { return left + (grid_position(map.b_grid, b) + 0.5) * cw; };
    auto y_of = [&](double a) { return top + plot_h - (grid_position(map.a_grid, a) + 0.5) * ch; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(height) + "\" fill=\"#ffffff\"/>\n";
    if (!title.empty())
        svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" + escape(title) + "</text>\n";

    svg += "<g id=\"cells\">\n";
    for (std::size_t ai = 0; ai < na; ++ai) {
        for (std::size_t bi = 0; bi < nb; ++bi) {
            const double v = map.values(ai, bi);
            const Rgb color = kind == HeatmapKind::SuccessRate ? sequential_color(v) : diverging_color(v);
            const double x = left + static_cast<double>(bi) * cw;
            const double y = top + plot_h - static_cast<double>(ai + 1) * ch;
            svg += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(cw) + "\" height=\"" + num(ch) +
                   "\" fill=\"" + to_hex(color) + "\" data-a=\"" + format_g17(map.a_grid[ai]) + "\" data-b=\"" +
                   format_g17(map.b_grid[bi]) + "\" data-value=\"" + format_g17(v) + "\"/>\n";
        }
    }
    svg += "</g>\n";

    if (overlay_threshold) {
        if (const auto seg = threshold_segment(map.a_grid, map.b_grid)) {
            const double b_lo = seg->first.first;
            const double b_hi = seg->second.first;
            std::vector<double> bs{b_lo};
            for (double b : map.b_grid)
                if (b > b_lo && b < b_hi) bs.push_back(b);
            if (b_hi > b_lo) bs.push_back(b_hi);
            std::string points;
            for (double b : bs) {
                if (!points.empty()) points += ' ';
                points += num(x_of(b)) + "," + num(y_of(threshold_a(b)));
            }
            svg += "<polyline id=\"threshold\" points=\"" + points +
                   "\" fill=\"none\" stroke=\"#ff0000\" stroke-width=\"2\" data-a-start=\"" +
                   format_g17(seg->first.second) + "\" data-a-end=\"" + format_g17(seg->second.second) + "\"/>\n";
        }
    }

    // Frame and axes.
    svg += "<rect x=\"" + num(left) + "\" y=\"" + num(top) + "\" width=\"" + num(plot_w) + "\" height=\"" + num(plot_h) +
           "\" fill=\"none\" stroke=\"#000000\"/>\n";
    svg += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    const std::size_t b_ticks[] = {0, nb / 2, nb - 1};
    for (std::size_t i : b_ticks)
        svg += "<text x=\"" + num(left + (static_cast<double>(i) + 0.5) * cw) + "\" y=\"" + num(top + plot_h + 16) +
               "\" text-anchor=\"middle\">" + label(map.b_grid[i]) + "</text>\n";
    const std::size_t a_ticks[] = {0, na / 2, na - 1};
    for (std::size_t i : a_ticks)
        svg += "<text x=\"" + num(left - 6) + "\" y=\"" + num(top + plot_h - (static_cast<double>(i) + 0.5) * ch + 4) +
               "\" text-anchor=\"end\">" + label(map.a_grid[i]) + "</text>\n";
    svg += "<text x=\"" + num(left + plot_w / 2) + "\" y=\"" + num(top + plot_h + 40) +
           "\" text-anchor=\"middle\" font-size=\"14\">b</text>\n";
    svg += "<text x=\"20\" y=\"" + num(top + plot_h / 2) + "\" text-anchor=\"middle\" font-size=\"14\">a</text>\n";
    svg += "</g>\n";
    svg += "</svg>\n";
    return svg;
}

void render_heatmap_svg(const HeatMap& map, HeatmapKind kind, const std::filesystem::path& path, bool overlay_threshold,
                        const std::string& title) {
    const std::string svg = heatmap_svg(map, kind, overlay_threshold, title);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << svg;
    if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace gmmrec
