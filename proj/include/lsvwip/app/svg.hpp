#pragma once

// Minimal standalone SVG line/step charts for report curves and sample paths.

#include <string>
#include <vector>

namespace lsvwip::app {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    /// Draw as a right-continuous step function (horizontal then vertical).
    bool step = false;
    bool markers = false;
    bool dashed = false;
};

struct Band {
    double x0 = 0.0;
    double x1 = 0.0;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    std::vector<Series> series;
    /// Alternating shaded vertical bands (e.g. excursion intervals).
    std::vector<Band> bands;
};

/// Escapes &, <, >, " and ' for XML text and attributes.
std::string xml_escape(const std::string& s);

/// Renders a well-formed standalone SVG document. Non-finite points and, on log
/// axes, non-positive coordinates are skipped.
std::string render_svg(const Plot& plot, int width = 720, int height = 440);

}  // namespace lsvwip::app
