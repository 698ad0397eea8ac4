#include "telegraphnet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "telegraphnet/errors.hpp"

namespace tgn::svg {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_plot(const std::string& path, const std::string& title,
                const std::vector<Series>& series, bool log_y) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);

  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  auto y_of = [log_y](double v) { return log_y ? std::log10(std::abs(v) + 1e-300) : v; };
  for (const Series& s : series) {
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      const double x = s.x[i];
      const double y = y_of(s.y[i]);
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  auto px = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kWidth - 2.0 * kMargin);
  };
  auto py = [&](double y) {
    return kHeight - kMargin - (y - ymin) / (ymax - ymin) * (kHeight - 2.0 * kMargin);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << title << (log_y ? " (log10)" : "")
      << "</text>\n"
      << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
      << "\" height=\"" << kHeight - 2 * kMargin
      << "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1\"/>\n";

  // Axis extrema labels.
  out << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 18
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << xmin << "</text>\n"
      << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 18
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << xmax
      << "</text>\n"
      << "<text x=\"" << kMargin - 6 << "\" y=\"" << kHeight - kMargin
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ymin
      << "</text>\n"
      << "<text x=\"" << kMargin - 6 << "\" y=\"" << kMargin + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << ymax
      << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const Series& s = series[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index i = 0; i < s.x.size(); ++i) {
      const double y = y_of(s.y[i]);
      if (!std::isfinite(y)) continue;
      out << px(s.x[i]) << ',' << py(y) << ' ';
    }
    out << "\"/>\n";
    const double ly = kMargin + 16.0 + 16.0 * static_cast<double>(k);
    out << "<line x1=\"" << kWidth - kMargin - 90 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kMargin - 70 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << kWidth - kMargin - 64 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace tgn::svg
