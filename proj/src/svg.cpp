#include "adelmarket/svg.hpp"

#include "adelmarket/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace adm::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;
constexpr double kMargin = 48.0;

std::string fixed2(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    if (ec != std::errc{}) throw std::domain_error("coordinate out of printable range");
    return std::string(buf, ptr);
}

std::string fmt_label(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    if (ec != std::errc{}) throw std::domain_error("label out of printable range");
    return std::string(buf, ptr);
}

std::string escape_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

} // namespace

void PlotSpec::validate() const {
    if (width < 1 || height < 1) throw std::domain_error("plot dimensions must be positive");
    if (series.empty()) throw std::domain_error("plot needs at least one series");
    for (const PlotSeries& s : series) {
        if (s.x.size() != s.y.size()) throw std::domain_error("series x/y length mismatch");
        if (s.x.empty()) throw std::domain_error("series must have at least one point");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                throw std::domain_error("non-finite point in series '" + s.label + "'");
            }
        }
    }
    if (fixed_axes && (!(x_min < x_max) || !(y_min < y_max))) {
        throw std::domain_error("fixed axis ranges must be nonempty");
    }
}

std::string render_svg(const PlotSpec& plot) {
    plot.validate();

    double x_lo = plot.x_min, x_hi = plot.x_max;
    double y_lo = plot.y_min, y_hi = plot.y_max;
    if (!plot.fixed_axes) {
        x_lo = y_lo = std::numeric_limits<double>::infinity();
        x_hi = y_hi = -std::numeric_limits<double>::infinity();
        for (const PlotSeries& s : plot.series) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                x_lo = std::min(x_lo, s.x[i]);
                x_hi = std::max(x_hi, s.x[i]);
                y_lo = std::min(y_lo, s.y[i]);
                y_hi = std::max(y_hi, s.y[i]);
            }
        }
        auto pad = [](double& lo, double& hi) {
            if (lo == hi) {
                const double bump = lo == 0.0 ? 1.0 : std::fabs(lo) * 0.1;
                lo -= bump;
                hi += bump;
            } else {
                const double bump = (hi - lo) * 0.05;
                lo -= bump;
                hi += bump;
            }
        };
        pad(x_lo, x_hi);
        pad(y_lo, y_hi);
    }

    const double w = static_cast<double>(plot.width);
    const double h = static_cast<double>(plot.height);
    const double px0 = kMargin, px1 = w - kMargin;
    const double py0 = h - kMargin, py1 = kMargin; // SVG y grows downward
    auto map_x = [&](double x) { return px0 + (x - x_lo) / (x_hi - x_lo) * (px1 - px0); };
    auto map_y = [&](double y) { return py0 + (y - y_lo) / (y_hi - y_lo) * (py1 - py0); };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(plot.width) +
           "\" height=\"" + std::to_string(plot.height) + "\" viewBox=\"0 0 " +
           std::to_string(plot.width) + " " + std::to_string(plot.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    if (!plot.title.empty()) {
        out += "<text x=\"" + fixed2(w / 2) +
               "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
               escape_text(plot.title) + "</text>\n";
    }
    out += "<rect x=\"" + fixed2(px0) + "\" y=\"" + fixed2(py1) + "\" width=\"" +
           fixed2(px1 - px0) + "\" height=\"" + fixed2(py0 - py1) +
           "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";

    // Extent labels on the frame corners.
    out += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444444\">\n";
    out += "<text x=\"" + fixed2(px0) + "\" y=\"" + fixed2(py0 + 16) + "\">" + fmt_label(x_lo) +
           "</text>\n";
    out += "<text x=\"" + fixed2(px1) + "\" y=\"" + fixed2(py0 + 16) +
           "\" text-anchor=\"end\">" + fmt_label(x_hi) + "</text>\n";
    out += "<text x=\"" + fixed2(px0 - 4) + "\" y=\"" + fixed2(py0) +
           "\" text-anchor=\"end\">" + fmt_label(y_lo) + "</text>\n";
    out += "<text x=\"" + fixed2(px0 - 4) + "\" y=\"" + fixed2(py1 + 10) +
           "\" text-anchor=\"end\">" + fmt_label(y_hi) + "</text>\n";
    out += "</g>\n";

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const PlotSeries& s = plot.series[si];
        const std::string color =
            s.color.empty() ? kPalette[si % kPaletteSize] : s.color;
        out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
               fixed2(s.stroke_width) + "\"";
        if (s.dashed) out += " stroke-dasharray=\"6 4\"";
        out += " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i > 0) out += ' ';
            out += fixed2(map_x(s.x[i]));
            out += ',';
            out += fixed2(map_y(s.y[i]));
        }
        out += "\"/>\n";
    }

    // Legend: one swatch + label per series, stacked in the top-left.
    out += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const PlotSeries& s = plot.series[si];
        const std::string color =
            s.color.empty() ? kPalette[si % kPaletteSize] : s.color;
        const double ly = py1 + 16 + 18 * static_cast<double>(si);
        out += "<line x1=\"" + fixed2(px0 + 8) + "\" y1=\"" + fixed2(ly - 4) + "\" x2=\"" +
               fixed2(px0 + 32) + "\" y2=\"" + fixed2(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"";
        if (s.dashed) out += " stroke-dasharray=\"6 4\"";
        out += "/>\n";
        out += "<text x=\"" + fixed2(px0 + 38) + "\" y=\"" + fixed2(ly) + "\">" +
               escape_text(s.label) + "</text>\n";
    }
    out += "</g>\n";
    out += "</svg>\n";
    return out;
}

void write_svg(const PlotSpec& plot, const std::string& path) {
    io::atomic_write_file(path, render_svg(plot));
}

} // namespace adm::svg
