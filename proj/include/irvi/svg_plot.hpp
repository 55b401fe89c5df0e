#pragma once

#include <string>
#include <vector>

namespace irvi {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

// Line plot with a log10 y axis; non-positive or non-finite y values are skipped.
std::string render_log_plot(const std::string& title, const std::string& x_label,
                            const std::vector<PlotSeries>& series, bool log_x = false);

void write_log_plot(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::vector<PlotSeries>& series, bool log_x = false);

} // namespace irvi
