#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rowloss {

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<double> x;
    std::vector<double> y;
};

struct SvgPanel {
    SvgPanel(std::string title_, std::string x_label_, std::string y_label_)
        : title(std::move(title_)), x_label(std::move(x_label_)), y_label(std::move(y_label_)) {}

    std::string title;
    std::string x_label;
    std::string y_label;
    double y_min = 0.0;
    double y_max = 1.0;
    std::vector<SvgSeries> series;
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

// 1/2/5 ladder step covering the range with ~5 ticks
inline double nice_step(double range) {
    if (range <= 0) return 1.0;
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= mult * mag) return mult * mag;
    }
    return 10.0 * mag;
}

}  // namespace detail

// Static side-by-side line-chart panels. Output depends only on the inputs
// and the version tag, so identical calls serialize identically.
inline std::string render_svg_figure(const std::vector<SvgPanel>& panels,
                                     std::string_view version_tag) {
    constexpr double panel_w = 480, panel_h = 340;
    constexpr double margin_l = 62, margin_r = 18, margin_t = 34, margin_b = 48;
    const double total_w = panel_w * static_cast<double>(panels.size());

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total_w << "\" height=\""
        << panel_h << "\" viewBox=\"0 0 " << total_w << ' ' << panel_h << "\">\n";
    out << "<!-- " << version_tag << " -->\n";
    out << "<rect width=\"" << total_w << "\" height=\"" << panel_h << "\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const SvgPanel& panel = panels[p];
        const double off = panel_w * static_cast<double>(p);
        const double plot_x = off + margin_l, plot_y = margin_t;
        const double plot_w = panel_w - margin_l - margin_r;
        const double plot_h = panel_h - margin_t - margin_b;

        double x_min = 0, x_max = 1;
        bool have_x = false;
        for (const auto& s : panel.series) {
            for (double v : s.x) {
                if (!have_x) {
                    x_min = x_max = v;
                    have_x = true;
                } else {
                    x_min = std::min(x_min, v);
                    x_max = std::max(x_max, v);
                }
            }
        }
        if (!have_x || x_max == x_min) x_max = x_min + 1;
        const double y_min = panel.y_min;
        const double y_max = panel.y_max > y_min ? panel.y_max : y_min + 1;

        const auto sx = [&](double v) { return plot_x + (v - x_min) / (x_max - x_min) * plot_w; };
        const auto sy = [&](double v) { return plot_y + plot_h - (v - y_min) / (y_max - y_min) * plot_h; };

        out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
        out << "<text x=\"" << detail::svg_num(off + panel_w / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">"
            << panel.title << "</text>\n";

        // gridlines + ticks
        const double y_step = detail::nice_step(y_max - y_min);
        for (double v = std::ceil(y_min / y_step) * y_step; v <= y_max + 1e-9; v += y_step) {
            const double yy = sy(v);
            out << "<line x1=\"" << detail::svg_num(plot_x) << "\" y1=\"" << detail::svg_num(yy)
                << "\" x2=\"" << detail::svg_num(plot_x + plot_w) << "\" y2=\"" << detail::svg_num(yy)
                << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
            out << "<text x=\"" << detail::svg_num(plot_x - 6) << "\" y=\"" << detail::svg_num(yy + 4)
                << "\" text-anchor=\"end\">" << detail::tick_label(v) << "</text>\n";
        }
        const double x_step = detail::nice_step(x_max - x_min);
        for (double v = std::ceil(x_min / x_step) * x_step; v <= x_max + 1e-9; v += x_step) {
            const double xx = sx(v);
            out << "<line x1=\"" << detail::svg_num(xx) << "\" y1=\"" << detail::svg_num(plot_y)
                << "\" x2=\"" << detail::svg_num(xx) << "\" y2=\""
                << detail::svg_num(plot_y + plot_h) << "\" stroke=\"#eeeeee\" stroke-width=\"1\"/>\n";
            out << "<text x=\"" << detail::svg_num(xx) << "\" y=\""
                << detail::svg_num(plot_y + plot_h + 16) << "\" text-anchor=\"middle\">"
                << detail::tick_label(v) << "</text>\n";
        }

        out << "<rect x=\"" << detail::svg_num(plot_x) << "\" y=\"" << detail::svg_num(plot_y)
            << "\" width=\"" << detail::svg_num(plot_w) << "\" height=\"" << detail::svg_num(plot_h)
            << "\" fill=\"none\" stroke=\"#333333\"/>\n";

        for (const auto& s : panel.series) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << ' ';
                out << detail::svg_num(sx(s.x[i])) << ',' << detail::svg_num(sy(s.y[i]));
            }
            out << "\"/>\n";
        }

        // legend, top right of the plot area
        double ly = plot_y + 14;
        for (const auto& s : panel.series) {
            const double lx = plot_x + plot_w - 120;
            out << "<line x1=\"" << detail::svg_num(lx) << "\" y1=\"" << detail::svg_num(ly - 4)
                << "\" x2=\"" << detail::svg_num(lx + 22) << "\" y2=\"" << detail::svg_num(ly - 4)
                << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>\n";
            out << "<text x=\"" << detail::svg_num(lx + 28) << "\" y=\"" << detail::svg_num(ly)
                << "\">" << s.label << "</text>\n";
            ly += 15;
        }

        out << "<text x=\"" << detail::svg_num(plot_x + plot_w / 2) << "\" y=\""
            << detail::svg_num(panel_h - 12) << "\" text-anchor=\"middle\">" << panel.x_label
            << "</text>\n";
        out << "<text transform=\"translate(" << detail::svg_num(off + 16) << ' '
            << detail::svg_num(plot_y + plot_h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
            << panel.y_label << "</text>\n";
        out << "</g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace rowloss
