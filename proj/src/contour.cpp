#include "presym/contour.hpp"

#include <array>
#include <map>
#include <utility>

namespace presym {

namespace {

// Edge keys: (i, j, 0) joins (i,j)-(i+1,j); (i, j, 1) joins (i,j)-(i,j+1).
struct EdgeKey {
  int i, j, axis;
  bool operator<(const EdgeKey& o) const {
    if (j != o.j) return j < o.j;
    if (i != o.i) return i < o.i;
    return axis < o.axis;
  }
};

}  // namespace

std::vector<ContourLine> trace_zero_contours(const GridSpec& g,
                                             const std::vector<double>& values) {
  const int cells_x = g.periodic_x ? g.nx : g.nx - 1;
  const int cells_y = g.periodic_y ? g.ny : g.ny - 1;
  auto value = [&](int i, int j) {
    return values[static_cast<std::size_t>((j % g.ny) * g.nx + (i % g.nx))];
  };
  auto positive = [](double v) { return v >= 0.0; };
  auto canonical = [&](EdgeKey e) {
    if (g.periodic_x) e.i %= g.nx;
    if (g.periodic_y) e.j %= g.ny;
    return e;
  };

  std::map<EdgeKey, ContourPoint> crossing;
  auto crossing_on = [&](EdgeKey e) -> bool {
    const EdgeKey key = canonical(e);
    if (crossing.count(key)) return true;
    const double v0 = value(e.i, e.j);
    const double v1 = e.axis == 0 ? value(e.i + 1, e.j) : value(e.i, e.j + 1);
    if (positive(v0) == positive(v1)) return false;
    const double frac = v0 / (v0 - v1);
    ContourPoint p;
    p.i = key.i;
    p.j = key.j;
    p.along_x = e.axis == 0;
    p.x = g.x0 + (key.i + (e.axis == 0 ? frac : 0.0)) * g.dx;
    p.y = g.y0 + (key.j + (e.axis == 1 ? frac : 0.0)) * g.dy;
    crossing.emplace(key, p);
    return true;
  };

  // Adjacency between crossings, built cell by cell.
  std::map<EdgeKey, std::vector<EdgeKey>> links;
  auto link = [&](EdgeKey a, EdgeKey b) {
    a = canonical(a);
    b = canonical(b);
    links[a].push_back(b);
    links[b].push_back(a);
  };

  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      // Cell edges in counter-clockwise order: bottom, right, top, left.
      const std::array<EdgeKey, 4> edges = {
          EdgeKey{i, j, 0}, EdgeKey{i + 1, j, 1}, EdgeKey{i, j + 1, 0}, EdgeKey{i, j, 1}};
      std::array<int, 4> hit{};
      int count = 0;
      for (int k = 0; k < 4; ++k) {
        if (crossing_on(edges[k])) hit[count++] = k;
      }
      if (count == 2) {
        link(edges[hit[0]], edges[hit[1]]);
      } else if (count == 4) {
        const double center =
            0.25 * (value(i, j) + value(i + 1, j) + value(i, j + 1) + value(i + 1, j + 1));
        // Corner (i, j) shares the sign of the center: separate it from the
        // opposite corner, joining bottom-right and top-left.
        if (positive(center) == positive(value(i, j))) {
          link(edges[0], edges[1]);
          link(edges[2], edges[3]);
        } else {
          link(edges[0], edges[3]);
          link(edges[1], edges[2]);
        }
      }
    }
  }

  std::vector<ContourLine> lines;
  std::map<EdgeKey, bool> visited;
  auto same = [](const EdgeKey& a, const EdgeKey& b) { return !(a < b) && !(b < a); };
  auto walk = [&](EdgeKey start, bool may_close) {
    ContourLine line;
    EdgeKey cur = start;
    while (true) {
      visited[cur] = true;
      line.points.push_back(crossing.at(cur));
      bool advanced = false;
      for (const auto& n : links[cur]) {
        if (visited.count(n)) {
          if (may_close && same(n, start) && line.points.size() > 2) line.closed = true;
          continue;
        }
        cur = n;
        advanced = true;
        break;
      }
      if (!advanced) break;
    }
    return line;
  };

  // Open polylines first (endpoints have a single link), then loops.
  for (const auto& [key, nbrs] : links) {
    if (nbrs.size() == 1 && !visited.count(key)) lines.push_back(walk(key, false));
  }
  for (const auto& [key, nbrs] : links) {
    if (!visited.count(key)) lines.push_back(walk(key, true));
  }
  return lines;
}

}  // namespace presym
