#include "emotrend/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "emotrend/errors.hpp"

namespace emotrend {

namespace {

constexpr int kWidth = 900;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 170;
constexpr int kMarginTop = 50;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_line_chart_svg(const std::vector<DailySeries>& series, const std::string& title,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open chart file for writing: " + path);

    std::int64_t day_min = 0, day_max = 0;
    double val_min = 0.0, val_max = 0.0;
    bool any = false;
    for (const auto& s : series) {
        for (const auto& p : s.points) {
            if (!any) {
                day_min = day_max = p.day;
                val_min = val_max = p.value;
                any = true;
            } else {
                day_min = std::min(day_min, p.day);
                day_max = std::max(day_max, p.day);
                val_min = std::min(val_min, p.value);
                val_max = std::max(val_max, p.value);
            }
        }
    }
    if (!any) {
        day_max = day_min + 1;
        val_max = 1.0;
    }
    if (day_max == day_min) ++day_max;
    if (val_max == val_min) val_max = val_min + 1.0;
    if (val_min > 0.0) val_min = 0.0;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto x_of = [&](std::int64_t day) {
        return kMarginLeft +
               plot_w * static_cast<double>(day - day_min) / static_cast<double>(day_max - day_min);
    };
    auto y_of = [&](double v) {
        return kMarginTop + plot_h * (1.0 - (v - val_min) / (val_max - val_min));
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
           "font-family=\"sans-serif\">"
        << title << "</text>\n";

    // Axes.
    out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
        << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
    out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
        << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

    // Value gridlines.
    for (int i = 0; i <= 4; ++i) {
        const double v = val_min + (val_max - val_min) * i / 4.0;
        const double y = y_of(v);
        out << "  <line x1=\"" << kMarginLeft << "\" y1=\"" << fmt(y) << "\" x2=\""
            << kMarginLeft + plot_w << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        out << "  <text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">" << fmt(v)
            << "</text>\n";
    }

    // Day ticks: first, middle, last.
    for (const std::int64_t day : {day_min, (day_min + day_max) / 2, day_max}) {
        const double x = x_of(day);
        out << "  <text x=\"" << fmt(x) << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
            << format_civil_day(civil_from_days(day)) << "</text>\n";
    }

    std::size_t color = 0;
    double legend_y = kMarginTop;
    for (const auto& s : series) {
        const char* stroke = kPalette[color % (sizeof(kPalette) / sizeof(kPalette[0]))];
        ++color;
        if (!s.points.empty()) {
            out << "  <polyline fill=\"none\" stroke=\"" << stroke
                << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& p : s.points) {
                out << fmt(x_of(p.day)) << ',' << fmt(y_of(p.value)) << ' ';
            }
            out << "\"/>\n";
        }
        out << "  <line x1=\"" << kMarginLeft + plot_w + 12 << "\" y1=\"" << fmt(legend_y)
            << "\" x2=\"" << kMarginLeft + plot_w + 32 << "\" y2=\"" << fmt(legend_y)
            << "\" stroke=\"" << stroke << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << kMarginLeft + plot_w + 38 << "\" y=\"" << fmt(legend_y + 4)
            << "\" font-size=\"11\" font-family=\"sans-serif\">" << s.name << "</text>\n";
        legend_y += 18.0;
    }
    out << "</svg>\n";
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace emotrend
