#include "irvi/svg_plot.hpp"

#include "irvi/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace irvi {

namespace {

constexpr double kWidth = 640, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

bool usable(double x, double y, bool log_x) {
    return std::isfinite(x) && std::isfinite(y) && y > 0.0 && (!log_x || x > 0.0);
}

} // namespace

std::string render_log_plot(const std::string& title, const std::string& x_label,
                            const std::vector<PlotSeries>& series, bool log_x) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i], log_x)) continue;
            const double xv = log_x ? std::log10(s.x[i]) : s.x[i];
            const double yv = std::log10(s.y[i]);
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    const bool empty = !(xmin <= xmax);
    if (empty) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    ymin = std::floor(ymin);
    ymax = std::max(std::ceil(ymax), ymin + 1.0);
    if (xmax == xmin) xmax = xmin + 1.0;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\">" << xml_escape(title)
      << "</text>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    const int step = std::max(1, static_cast<int>((ymax - ymin) / 8.0));
    for (int e = static_cast<int>(ymin); e <= static_cast<int>(ymax); e += step) {
        o << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << py(e)
          << "\" y2=\"" << py(e) << "\" stroke=\"#ddd\"/>\n";
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(e) + 4 << "\" text-anchor=\"end\">1e"
          << e << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double v = xmin + (xmax - xmin) * i / 4.0;
        const double shown = log_x ? std::pow(10.0, v) : v;
        o << "<text x=\"" << px(v) << "\" y=\"" << kTop + ph + 16
          << "\" text-anchor=\"middle\">" << format_double(std::round(shown * 1000) / 1000)
          << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">" << xml_escape(x_label) << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % (sizeof(kColors) / sizeof(kColors[0]))];
        o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i], log_x)) continue;
            const double xv = log_x ? std::log10(s.x[i]) : s.x[i];
            o << px(xv) << ',' << py(std::log10(s.y[i])) << ' ';
        }
        o << "\"/>\n";
        o << "<text x=\"" << kLeft + pw - 4 << "\" y=\"" << kTop + 16 + 14 * si
          << "\" text-anchor=\"end\" fill=\"" << color << "\">" << xml_escape(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_log_plot(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::vector<PlotSeries>& series, bool log_x) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << render_log_plot(title, x_label, series, log_x);
}

} // namespace irvi
