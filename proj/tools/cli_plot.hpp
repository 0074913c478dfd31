#ifndef TTWLAB_CLI_PLOT_HPP
#define TTWLAB_CLI_PLOT_HPP

#include <algorithm>
#include <fstream>
#include <string>
#include <vector>

#include "cli_util.hpp"

// Self-contained SVG writer (no external renderer) plus a gnuplot-script
// alternative, enough for potential curves and orbit traces.

namespace cli {

struct Curve {
    std::string label;
    std::vector<double> x, y;
    bool dashed = false;
};

inline std::string svg_color(size_t idx) {
    static const char* palette[] = {"#1b6ca8", "#c23b22", "#2e8540", "#8031a7",
                                    "#b8860b", "#0f7173", "#a23b72", "#444444"};
    return palette[idx % (sizeof palette / sizeof palette[0])];
}

inline void write_svg(const std::string& path, const std::vector<Curve>& curves,
                      const std::string& x_label, const std::string& y_label,
                      double y_cap = 0.0) {
    double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
    for (const auto& c : curves)
        for (size_t i = 0; i < c.x.size(); ++i) {
            if (y_cap > 0.0 && c.y[i] > y_cap)
                continue;
            x_min = std::min(x_min, c.x[i]);
            x_max = std::max(x_max, c.x[i]);
            y_min = std::min(y_min, c.y[i]);
            y_max = std::max(y_max, c.y[i]);
        }
    if (x_min >= x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    if (y_min >= y_max) {
        y_min -= 0.5;
        y_max += 0.5;
    }

    const double w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
    auto px = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - y_min) / (y_max - y_min) * (h - mt - mb); };

    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write SVG file: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        const double fx = x_min + tick * (x_max - x_min) / 4.0;
        const double fy = y_min + tick * (y_max - y_min) / 4.0;
        out << "<text x=\"" << px(fx) << "\" y=\"" << h - mb + 18
            << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt3(fx) << "</text>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << py(fy) + 4
            << "\" font-size=\"11\" text-anchor=\"end\">" << fmt3(fy) << "</text>\n";
    }
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n"
        << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";

    for (size_t ci = 0; ci < curves.size(); ++ci) {
        const auto& c = curves[ci];
        out << "<polyline fill=\"none\" stroke=\"" << svg_color(ci)
            << "\" stroke-width=\"1.5\"";
        if (c.dashed)
            out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (size_t i = 0; i < c.x.size(); ++i) {
            if (y_cap > 0.0 && c.y[i] > y_cap)
                continue;
            out << px(c.x[i]) << "," << py(c.y[i]) << " ";
        }
        out << "\"/>\n";
        out << "<text x=\"" << w - mr - 140 << "\" y=\"" << mt + 16 + 16 * ci
            << "\" font-size=\"12\" fill=\"" << svg_color(ci) << "\">" << c.label
            << "</text>\n";
    }
    out << "</svg>\n";
}

inline void write_gnuplot(const std::string& path, const std::vector<Curve>& curves,
                          const std::string& x_label, const std::string& y_label,
                          double y_cap = 0.0) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write gnuplot script: " + path);
    out << "set xlabel '" << x_label << "'\nset ylabel '" << y_label << "'\n";
    if (y_cap > 0.0)
        out << "set yrange [*:" << fmt17(y_cap) << "]\n";
    out << "plot ";
    for (size_t ci = 0; ci < curves.size(); ++ci) {
        out << (ci ? ", " : "") << "'-' with lines " << (curves[ci].dashed ? "dt 2 " : "")
            << "title '" << curves[ci].label << "'";
    }
    out << "\n";
    for (const auto& c : curves) {
        for (size_t i = 0; i < c.x.size(); ++i)
            out << fmt17(c.x[i]) << " " << fmt17(c.y[i]) << "\n";
        out << "e\n";
    }
}

} // namespace cli

#endif
