#pragma once

#include <string>
#include <vector>

namespace pwave::cli {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<PlotSeries> series;
};

/// Static line plot. With log_y, nonpositive and non-finite points are dropped.
std::string render_svg(const PlotSpec& spec);

/// Throws ArgumentError when the file cannot be written.
void write_svg(const std::string& path, const PlotSpec& spec);

}  // namespace pwave::cli
