// Minimal SVG scatter: count vs node count, log-scale y, CI whiskers.

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kuramem/io.hpp"

namespace kuramem {

inline std::string family_label(const ResultRecord& r) {
    if (r.topology == "honeycomb" || r.topology == "honeycomb_chain")
        return r.topology + " n_c=" + std::to_string(r.param1);
    return r.topology;
}

inline std::string render_capacity_svg(const std::vector<ResultRecord>& rows) {
    constexpr double width = 720, height = 480, left = 70, right = 200, top = 30, bottom = 50;
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    std::map<std::string, std::vector<ResultRecord>> series;
    std::vector<std::string> order;
    for (const auto& r : rows) {
        const auto label = family_label(r);
        if (!series.contains(label)) order.push_back(label);
        series[label].push_back(r);
    }

    double xmax = 1, ymin_log = 0, ymax_log = 1;
    for (const auto& r : rows) {
        xmax = std::max(xmax, static_cast<double>(r.n_nodes));
        ymax_log = std::max(ymax_log, std::log10(std::max({r.ci_high, r.count, 1.0})));
    }
    ymax_log = std::ceil(ymax_log);
    const double pw = width - left - right, ph = height - top - bottom;
    auto sx = [&](double x) { return left + pw * x / (xmax * 1.05); };
    auto sy = [&](double y) {
        const double ly = std::log10(std::max(y, 1.0));
        return top + ph * (1.0 - (ly - ymin_log) / (ymax_log - ymin_log));
    };

    std::ostringstream svg;
    svg.setf(std::ios::fixed);
    svg.precision(2);
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
        << "\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(ymin_log); d <= static_cast<int>(ymax_log); ++d) {
        const double y = sy(std::pow(10.0, d));
        svg << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
            << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4 << "\" font-size=\"11\" text-anchor=\"end\">1e" << d
            << "</text>\n";
    }
    const int xstep = std::max(1, static_cast<int>(xmax / 8));
    for (int x = 0; x <= static_cast<int>(xmax); x += xstep) {
        svg << "<text x=\"" << sx(x) << "\" y=\"" << top + ph + 16 << "\" font-size=\"11\" text-anchor=\"middle\">" << x
            << "</text>\n";
    }
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"13\" text-anchor=\"middle\">number of oscillators n</text>\n";
    svg << "<text x=\"16\" y=\"" << top + ph / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << top + ph / 2 << ")\">stable configurations</text>\n";

    for (std::size_t s = 0; s < order.size(); ++s) {
        const char* colour = palette[s % std::size(palette)];
        auto pts = series[order[s]];
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.n_nodes < b.n_nodes; });
        for (const auto& r : pts) {
            const double x = sx(r.n_nodes);
            if (r.mode == "sampled") {
                svg << "<line x1=\"" << x << "\" y1=\"" << sy(r.ci_low) << "\" x2=\"" << x << "\" y2=\"" << sy(r.ci_high)
                    << "\" stroke=\"" << colour << "\"/>\n";
                const double y = sy(r.count);
                svg << "<polygon points=\"" << x << ',' << y - 5 << ' ' << x - 4.5 << ',' << y + 4 << ' ' << x + 4.5 << ','
                    << y + 4 << "\" fill=\"" << colour << "\"/>\n";
            } else {
                svg << "<circle cx=\"" << x << "\" cy=\"" << sy(r.count) << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
            }
        }
        const double ly = top + 10 + 20.0 * static_cast<double>(s);
        svg << "<circle cx=\"" << width - right + 20 << "\" cy=\"" << ly << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
        svg << "<text x=\"" << width - right + 30 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << order[s]
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace kuramem
