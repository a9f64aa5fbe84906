#include "lsvwip/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace lsvwip::app {

namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    double transform(double v) const { return log ? std::log10(v) : v; }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
};

Axis fit_axis(const std::vector<double>& values, bool log) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : values) {
        if (!a.usable(v)) continue;
        lo = std::min(lo, a.transform(v));
        hi = std::max(hi, a.transform(v));
    }
    if (!std::isfinite(lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = log ? 0.0 : 0.05 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
    return a;
}

}  // namespace

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render_svg(const Plot& plot, int width, int height) {
    const double left = 70.0;
    const double right = 170.0;
    const double top = 40.0;
    const double bottom = 50.0;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& s : plot.series) {
        xs.insert(xs.end(), s.x.begin(), s.x.end());
        ys.insert(ys.end(), s.y.begin(), s.y.end());
    }
    for (const auto& b : plot.bands) {
        xs.push_back(b.x0);
        xs.push_back(b.x1);
    }
    const Axis ax = fit_axis(xs, plot.log_x);
    const Axis ay = fit_axis(ys, plot.log_y);
    const auto px = [&](double v) { return left + (ax.transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    const auto py = [&](double v) { return top + ph - (ay.transform(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << xml_escape(plot.title) << "</text>\n";

    for (std::size_t i = 0; i < plot.bands.size(); ++i) {
        const auto& b = plot.bands[i];
        if (!ax.usable(b.x0) || !ax.usable(b.x1)) continue;
        o << "<rect x=\"" << fmt(px(b.x0)) << "\" y=\"" << fmt(top) << "\" width=\""
          << fmt(std::max(0.0, px(b.x1) - px(b.x0))) << "\" height=\"" << fmt(ph) << "\" fill=\""
          << (i % 2 == 0 ? "#eeeeee" : "#dde6f0") << "\"/>\n";
    }

    // Frame and ticks.
    o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = ax.lo + (ax.hi - ax.lo) * k / 4.0;
        const double fy = ay.lo + (ay.hi - ay.lo) * k / 4.0;
        const double vx = ax.log ? std::pow(10.0, fx) : fx;
        const double vy = ay.log ? std::pow(10.0, fy) : fy;
        const double X = left + pw * k / 4.0;
        const double Y = top + ph - ph * k / 4.0;
        o << "<line x1=\"" << fmt(X) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(X) << "\" y2=\""
          << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(X) << "\" y=\"" << fmt(top + ph + 18) << "\" text-anchor=\"middle\">"
          << xml_escape(tick_label(vx)) << "</text>\n";
        o << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(Y) << "\" x2=\"" << fmt(left) << "\" y2=\"" << fmt(Y)
          << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(Y + 4) << "\" text-anchor=\"end\">"
          << xml_escape(tick_label(vy)) << "</text>\n";
    }
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(height - 10.0) << "\" text-anchor=\"middle\">"
      << xml_escape(plot.x_label + (plot.log_x ? " (log)" : "")) << "</text>\n";
    o << "<text x=\"16\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(top + ph / 2) << ")\">" << xml_escape(plot.y_label + (plot.log_y ? " (log)" : "")) << "</text>\n";

    for (std::size_t si = 0; si < plot.series.size(); ++si) {
        const auto& s = plot.series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        std::ostringstream pts;
        bool have_prev = false;
        double prev_y = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
            if (s.step && have_prev) {
                pts << fmt(px(s.x[i])) << ',' << fmt(py(prev_y)) << ' ';
                ++count;
            }
            pts << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
            ++count;
            have_prev = true;
            prev_y = s.y[i];
        }
        if (count > 0)
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
              << (s.dashed ? " stroke-dasharray=\"6 3\"" : "") << " points=\"" << pts.str() << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
                if (ax.usable(s.x[i]) && ay.usable(s.y[i]))
                    o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i])) << "\" r=\"3\" fill=\""
                      << color << "\"/>\n";
        const double ly = top + 16.0 + 18.0 * static_cast<double>(si);
        o << "<line x1=\"" << fmt(left + pw + 12) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw + 36)
          << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << fmt(left + pw + 42) << "\" y=\"" << fmt(ly + 4) << "\">" << xml_escape(s.label)
          << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace lsvwip::app
