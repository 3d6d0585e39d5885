#ifndef PRESYM_TOOLS_ARTIFACTS_HPP
#define PRESYM_TOOLS_ARTIFACTS_HPP

#include <string>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"
#include "presym/classifier.hpp"

namespace presym::tools {

/// Writes to `path.tmp` and renames over `path`.
void write_atomic(const std::string& path, const std::string& contents);

/// Minimal SVG: square panels with data-space polylines, markers and labels.
class Svg {
 public:
  Svg(int panels, bool timestamp);

  struct Box {
    double x0, x1, y0, y1;
  };
  void frame(int panel, const Box& data, const std::string& title, const std::string& xlabel,
             const std::string& ylabel);
  void polyline(int panel, const std::vector<Eigen::Vector2d>& pts, const std::string& color,
                double width = 1.0, bool dashed = false);
  void marker(int panel, const Eigen::Vector2d& p, const std::string& color, double radius = 3.0);
  std::string str() const;

 private:
  Eigen::Vector2d map(int panel, const Eigen::Vector2d& p) const;

  int panels_;
  bool timestamp_;
  std::vector<Box> boxes_;
  std::vector<std::string> body_;
};

/// One pass/fail row of a run report.
struct Check {
  std::string name;
  double value = 0.0;
  std::string observed;  // for non-numeric checks
  std::string expected;
  double margin = 0.0;  // > 0 means pass with that much room
  bool pass = false;
};

nlohmann::json to_json(const Check& c);
nlohmann::json to_json(const Classification& c);

/// "less than" check: pass iff value < bound, margin = bound / value.
Check below(const std::string& name, double value, double bound);
/// "more than" check: pass iff value > bound, margin = value / bound.
Check above(const std::string& name, double value, double bound);
Check equal(const std::string& name, const std::string& got, const std::string& want);

}  // namespace presym::tools

#endif  // PRESYM_TOOLS_ARTIFACTS_HPP
