#include "artifacts.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace presym::tools {

namespace {

constexpr double kPanel = 360.0;
constexpr double kMargin = 50.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

void write_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << contents;
    out.close();
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Svg::Svg(int panels, bool timestamp)
    : panels_(panels), timestamp_(timestamp), boxes_(panels, Box{0, 1, 0, 1}) {}

Eigen::Vector2d Svg::map(int panel, const Eigen::Vector2d& p) const {
  const Box& b = boxes_[panel];
  const double x0 = kMargin + panel * (kPanel + 2 * kMargin);
  return {x0 + (p.x() - b.x0) / (b.x1 - b.x0) * kPanel,
          kMargin + (b.y1 - p.y()) / (b.y1 - b.y0) * kPanel};
}

void Svg::frame(int panel, const Box& data, const std::string& title, const std::string& xlabel,
                const std::string& ylabel) {
  boxes_[panel] = data;
  const Eigen::Vector2d lo = map(panel, {data.x0, data.y0});
  const Eigen::Vector2d hi = map(panel, {data.x1, data.y1});
  std::ostringstream os;
  os << "<rect x=\"" << fmt(lo.x()) << "\" y=\"" << fmt(hi.y()) << "\" width=\"" << fmt(kPanel)
     << "\" height=\"" << fmt(kPanel) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt(lo.x()) << "\" y=\"" << fmt(hi.y() - 12) << "\">" << escape(title)
     << "</text>\n";
  os << "<text x=\"" << fmt(lo.x() + kPanel / 2) << "\" y=\"" << fmt(lo.y() + 30)
     << "\" text-anchor=\"middle\">" << escape(xlabel) << "</text>\n";
  os << "<text x=\"" << fmt(lo.x() - 30) << "\" y=\"" << fmt(lo.y() - kPanel / 2)
     << "\" text-anchor=\"middle\">" << escape(ylabel) << "</text>\n";
  for (double v : {data.x0, data.x1})
    os << "<text x=\"" << fmt(map(panel, {v, data.y0}).x()) << "\" y=\"" << fmt(lo.y() + 14)
       << "\" font-size=\"10\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  for (double v : {data.y0, data.y1})
    os << "<text x=\"" << fmt(lo.x() - 4) << "\" y=\"" << fmt(map(panel, {data.x0, v}).y() + 4)
       << "\" font-size=\"10\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  body_.push_back(os.str());
}

void Svg::polyline(int panel, const std::vector<Eigen::Vector2d>& pts, const std::string& color,
                   double width, bool dashed) {
  if (pts.size() < 2) return;
  std::ostringstream os;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << fmt(width) << "\"";
  if (dashed) os << " stroke-dasharray=\"4 3\"";
  os << " points=\"";
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Eigen::Vector2d q = map(panel, pts[k]);
    os << (k ? " " : "") << fmt(q.x()) << "," << fmt(q.y());
  }
  os << "\"/>\n";
  body_.push_back(os.str());
}

void Svg::marker(int panel, const Eigen::Vector2d& p, const std::string& color, double radius) {
  const Eigen::Vector2d q = map(panel, p);
  body_.push_back("<circle cx=\"" + fmt(q.x()) + "\" cy=\"" + fmt(q.y()) + "\" r=\"" +
                  fmt(radius) + "\" fill=\"" + color + "\"/>\n");
}

std::string Svg::str() const {
  const double w = panels_ * (kPanel + 2 * kMargin);
  const double h = kPanel + 2 * kMargin;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w) << "\" height=\""
     << fmt(h) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (timestamp_) {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    os << "<!-- generated " << buf << " -->\n";
  }
  for (const std::string& s : body_) os << s;
  os << "</svg>\n";
  return os.str();
}

nlohmann::json to_json(const Check& c) {
  nlohmann::json j;
  j["name"] = c.name;
  if (c.observed.empty()) j["value"] = c.value;
  else j["observed"] = c.observed;
  j["expected"] = c.expected;
  j["margin"] = std::isfinite(c.margin) ? nlohmann::json(c.margin) : nlohmann::json("inf");
  j["pass"] = c.pass;
  return j;
}

nlohmann::json to_json(const Classification& c) {
  nlohmann::json j;
  j["class"] = to_string(c.cls);
  j["critical_set"] = to_string(c.sigma.kind);
  j["tolerance"] = c.tolerance;
  const double r = c.min_ratio();
  j["min_margin_ratio"] = std::isfinite(r) ? nlohmann::json(r) : nlohmann::json("inf");
  if (!c.note.empty()) j["note"] = c.note;
  nlohmann::json margins = nlohmann::json::array();
  for (const Margin& m : c.margins) {
    const double ratio = m.ratio(c.tolerance);
    margins.push_back({{"name", m.name},
                       {"value", m.value},
                       {"must_vanish", m.vanishes},
                       {"ratio", std::isfinite(ratio) ? nlohmann::json(ratio)
                                                      : nlohmann::json("inf")}});
  }
  j["margins"] = margins;
  return j;
}

Check below(const std::string& name, double value, double bound) {
  const double a = std::abs(value);
  return {name, value, "", "< " + nlohmann::json(bound).dump(),
          a == 0.0 ? std::numeric_limits<double>::infinity() : bound / a, a < bound};
}

Check above(const std::string& name, double value, double bound) {
  const double a = std::abs(value);
  return {name, value, "", "> " + nlohmann::json(bound).dump(), a / bound, a > bound};
}

Check equal(const std::string& name, const std::string& got, const std::string& want) {
  return {name, 0.0, got, want, got == want ? 1.0 : 0.0, got == want};
}

}  // namespace presym::tools
