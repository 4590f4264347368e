#include "scfsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace scfsim {
namespace {

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

// Expands [lo, hi] to a round tick step and returns the tick positions.
std::vector<double> nice_ticks(Range& r) {
  if (!(r.hi > r.lo)) r.hi = r.lo + 1.0;
  const double span = r.hi - r.lo;
  const double raw_step = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw_step)));
  double step = mag;
  for (const double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * m >= raw_step) {
      step = mag * m;
      break;
    }
  }
  r.lo = std::floor(r.lo / step) * step;
  r.hi = std::ceil(r.hi / step) * step;
  std::vector<double> ticks;
  for (double v = r.lo; v <= r.hi + step * 0.5; v += step) ticks.push_back(v);
  return ticks;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt2(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

void write_line_chart(std::ostream& out, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<SvgSeries>& series, int width,
                      int height) {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double pw = width - ml - mr;
  const double ph = height - mt - mb;

  Range xr{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  Range yr = xr;
  for (const SvgSeries& s : series) {
    for (const auto& [x, y] : s.points) {
      xr.lo = std::min(xr.lo, x);
      xr.hi = std::max(xr.hi, x);
      yr.lo = std::min(yr.lo, y);
      yr.hi = std::max(yr.hi, y);
    }
  }
  if (!std::isfinite(xr.lo)) xr = {0.0, 1.0};
  if (!std::isfinite(yr.lo)) yr = {0.0, 1.0};
  const std::vector<double> xticks = nice_ticks(xr);
  const std::vector<double> yticks = nice_ticks(yr);

  const auto X = [&](double v) {
    return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw;
  };
  const auto Y = [&](double v) {
    return mt + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\" font-weight=\"bold\">"
      << escape(title) << "</text>\n";

  for (const double t : xticks) {
    const double x = X(t);
    out << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(mt) << "\" x2=\""
        << fmt2(x) << "\" y2=\"" << fmt2(mt + ph)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt2(x) << "\" y=\"" << fmt2(mt + ph + 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(t) << "</text>\n";
  }
  for (const double t : yticks) {
    const double y = Y(t);
    out << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(y) << "\" x2=\""
        << fmt2(ml + pw) << "\" y2=\"" << fmt2(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt2(ml - 8) << "\" y=\"" << fmt2(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
        << "font-size=\"11\">" << fmt(t) << "</text>\n";
  }

  out << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(mt + ph) << "\" x2=\""
      << fmt2(ml + pw) << "\" y2=\"" << fmt2(mt + ph)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "<line x1=\"" << fmt2(ml) << "\" y1=\"" << fmt2(mt) << "\" x2=\""
      << fmt2(ml) << "\" y2=\"" << fmt2(mt + ph)
      << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  out << "<text x=\"" << fmt2(ml + pw / 2) << "\" y=\"" << fmt2(mt + ph + 40)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt2(mt + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << fmt2(mt + ph / 2) << ")\">"
      << escape(y_label) << "</text>\n";

  for (const SvgSeries& s : series) {
    if (s.points.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"1.8\" points=\"";
    for (const auto& [x, y] : s.points) {
      out << fmt2(X(x)) << ',' << fmt2(Y(y)) << ' ';
    }
    out << "\"/>\n";
  }

  double ly = mt + 10;
  for (const SvgSeries& s : series) {
    out << "<line x1=\"" << fmt2(ml + pw - 150) << "\" y1=\"" << fmt2(ly)
        << "\" x2=\"" << fmt2(ml + pw - 125) << "\" y2=\"" << fmt2(ly)
        << "\" stroke=\"" << s.color << "\" stroke-width=\"2.5\"/>\n";
    out << "<text x=\"" << fmt2(ml + pw - 118) << "\" y=\"" << fmt2(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(s.label)
        << "</text>\n";
    ly += 18;
  }
  out << "</svg>\n";
}

}  // namespace scfsim
