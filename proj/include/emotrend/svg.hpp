#pragma once

#include <string>
#include <vector>

#include "emotrend/trends.hpp"

namespace emotrend {

// Static multi-series line chart with day axis, value axis and a legend.
void write_line_chart_svg(const std::vector<DailySeries>& series, const std::string& title,
                          const std::string& path);

}  // namespace emotrend
