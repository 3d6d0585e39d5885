#ifndef PRESYM_CONTOUR_HPP
#define PRESYM_CONTOUR_HPP

#include <vector>

namespace presym {

/// Regular sampling grid; node (i, j) sits at (x0 + i dx, y0 + j dy).
/// Periodic axes wrap their last cell back onto node 0.
struct GridSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double dx = 1.0;
  double dy = 1.0;
  int nx = 0;
  int ny = 0;
  bool periodic_x = false;
  bool periodic_y = false;
};

/// A zero crossing on a grid edge. `along_x` means the edge joins (i, j) and
/// (i + 1, j); the crossing's x is then the interpolated coordinate.
struct ContourPoint {
  double x = 0.0;
  double y = 0.0;
  bool along_x = true;
  int i = 0;
  int j = 0;
};

struct ContourLine {
  std::vector<ContourPoint> points;
  bool closed = false;
};

/// Marching squares over node values stored row-major: values[j * nx + i].
/// Node values that are exactly zero are treated as positive. Saddle cells
/// are resolved by the mean of the four corners.
std::vector<ContourLine> trace_zero_contours(const GridSpec& grid,
                                             const std::vector<double>& values);

}  // namespace presym

#endif  // PRESYM_CONTOUR_HPP
