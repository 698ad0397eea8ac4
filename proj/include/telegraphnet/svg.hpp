#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tgn::svg {

struct Series {
  std::string label;
  Eigen::ArrayXd x;
  Eigen::ArrayXd y;
};

/// Writes a self-contained SVG line plot (linear axes, auto-scaled, one
/// polyline per series with a small legend). log_y plots log10(|y|+floor).
void write_plot(const std::string& path, const std::string& title,
                const std::vector<Series>& series, bool log_y = false);

}  // namespace tgn::svg
