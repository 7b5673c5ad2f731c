#ifndef OFFTRC_HARNESS_PLOT_HPP
#define OFFTRC_HARNESS_PLOT_HPP

#include <string>
#include <vector>

namespace offtrc {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Static SVG line chart. Non-finite points are skipped.
std::string render_line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                             const std::vector<PlotSeries>& series);
void write_line_plot(const std::string& path, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace offtrc

#endif  // OFFTRC_HARNESS_PLOT_HPP
