#pragma once

#include <string>
#include <vector>

namespace adm::svg {

struct PlotSeries {
    std::vector<double> x;
    std::vector<double> y;
    std::string label;
    std::string color;       // empty: palette color by position
    double stroke_width = 1.5;
    bool dashed = false;
};

struct PlotSpec {
    int width = 800;
    int height = 480;
    std::string title;
    std::vector<PlotSeries> series;
    // Auto-scaled to the data unless fixed here.
    bool fixed_axes = false;
    double x_min = 0.0, x_max = 1.0;
    double y_min = 0.0, y_max = 1.0;

    void validate() const;
};

// Standalone SVG document: frame, corner extent labels, one polyline per
// series, legend. All numbers are printed with fixed precision so the
// bytes depend only on the input.
std::string render_svg(const PlotSpec& plot);

// render_svg written atomically (temp file + rename).
void write_svg(const PlotSpec& plot, const std::string& path);

} // namespace adm::svg
