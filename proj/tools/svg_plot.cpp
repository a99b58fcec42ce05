#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pwave/errors.hpp"

namespace pwave::cli {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad()
    {
        if (!std::isfinite(lo)) lo = 0, hi = 1;
        if (hi - lo < 1e-300) {
            const double d = std::max(std::abs(lo) * 0.05, 1e-12);
            lo -= d;
            hi += d;
        }
    }
};

}  // namespace

std::string render_svg(const PlotSpec& spec)
{
    auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
    auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0); };

    Range xr, yr;
    for (const auto& s : spec.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable(s.x[i], s.y[i])) {
                xr.add(s.x[i]);
                yr.add(ty(s.y[i]));
            }
    xr.pad();
    yr.pad();

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << num(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << escape(spec.title) << "</text>\n";
    os << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\""
       << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        os << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(xv))
           << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
           << tick_label(xv) << "</text>\n";
    }
    if (spec.log_y) {
        const int first = static_cast<int>(std::ceil(yr.lo));
        const int last = static_cast<int>(std::floor(yr.hi));
        const int stride = std::max(1, (last - first) / 8 + 1);
        for (int d = first; d <= last; d += stride) {
            os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(d)) << "\" x2=\"" << num(kLeft)
               << "\" y2=\"" << num(py(d)) << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(d) + 4) << "\" text-anchor=\"end\">1e"
               << d << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double yv = yr.lo + (yr.hi - yr.lo) * i / 5.0;
            os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << num(kLeft)
               << "\" y2=\"" << num(py(yv)) << "\" stroke=\"black\"/>\n";
            os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">"
               << tick_label(yv) << "</text>\n";
        }
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16) << "\" text-anchor=\"middle\">"
       << escape(spec.x_label) << "</text>\n";
    os << "<text transform=\"translate(18," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(spec.y_label) << (spec.log_y ? " (log)" : "") << "</text>\n";

    double legend_y = kTop + 16;
    for (const auto& s : spec.series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
        if (s.dashed) os << " stroke-dasharray=\"6 4\"";
        os << " points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (usable(s.x[i], s.y[i])) os << num(px(s.x[i])) << ',' << num(py(ty(s.y[i]))) << ' ';
        os << "\"/>\n";
        os << "<line x1=\"" << num(kLeft + pw - 150) << "\" y1=\"" << num(legend_y) << "\" x2=\""
           << num(kLeft + pw - 125) << "\" y2=\"" << num(legend_y) << "\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        os << "<text x=\"" << num(kLeft + pw - 118) << "\" y=\"" << num(legend_y + 4) << "\">" << escape(s.name)
           << "</text>\n";
        legend_y += 16;
    }
    os << "</svg>\n";
    return os.str();
}

void write_svg(const std::string& path, const PlotSpec& spec)
{
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write plot '" + path + "'");
    out << render_svg(spec);
}

}  // namespace pwave::cli
