#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "ledbatsim/csvio.hpp"

namespace ledbatsim::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Minimal static line chart: axes, one polyline per series, legend.
inline std::string line_chart(const std::vector<Series>& series,
                              const std::string& x_label,
                              const std::string& y_label,
                              bool log_x = false) {
    const double w = 640, h = 420, ml = 60, mr = 20, mt = 20, mb = 45;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double xv = log_x ? std::log10(s.x[i]) : s.x[i];
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    auto px = [&](double x) {
        double xv = log_x ? std::log10(x) : x;
        return ml + (xv - xmin) / (xmax - xmin) * (w - ml - mr);
    };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                                   "#bcbd22", "#e377c2"};
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_double(w) +
           "\" height=\"" + format_double(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(h - mb) + "\" x2=\"" +
           format_double(w - mr) + "\" y2=\"" + format_double(h - mb) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + format_double(ml) + "\" y1=\"" + format_double(mt) + "\" x2=\"" +
           format_double(ml) + "\" y2=\"" + format_double(h - mb) + "\" stroke=\"black\"/>\n";
    out += "<text x=\"" + format_double((ml + w - mr) / 2) + "\" y=\"" + format_double(h - 8) +
           "\" text-anchor=\"middle\">" + x_label + "</text>\n";
    out += "<text x=\"14\" y=\"" + format_double((mt + h - mb) / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           format_double((mt + h - mb) / 2) + ")\">" + y_label + "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        double yv = ymin + (ymax - ymin) * k / 4.0;
        out += "<text x=\"" + format_double(ml - 6) + "\" y=\"" + format_double(py(yv) + 4) +
               "\" text-anchor=\"end\">" + format_double(std::round(yv * 1000) / 1000) + "</text>\n";
        double xraw = xmin + (xmax - xmin) * k / 4.0;
        double xv = log_x ? std::pow(10.0, xraw) : xraw;
        out += "<text x=\"" + format_double(ml + (w - ml - mr) * k / 4.0) + "\" y=\"" +
               format_double(h - mb + 16) + "\" text-anchor=\"middle\">" +
               format_double(std::round(xv * 10000) / 10000) + "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        std::string pts;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            pts += format_double(px(s.x[i])) + "," + format_double(py(s.y[i])) + " ";
        const char* color = colors[ci % 10];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        out += "<text x=\"" + format_double(w - mr - 120) + "\" y=\"" +
               format_double(mt + 14.0 * (ci + 1)) + "\" fill=\"" + color + "\">" + s.label +
               "</text>\n";
        ci++;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace ledbatsim::svg
