#include "specweights/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace sw {

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 matching points");
  const int n = (int)x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

void write_svg_plot(const std::string& path, const std::vector<double>& x,
                    const std::vector<double>& y, const std::string& title) {
  if (x.empty() || x.size() != y.size()) return;
  const double W = 640, H = 420, pad = 50;
  auto [xlo_it, xhi_it] = std::minmax_element(x.begin(), x.end());
  auto [ylo_it, yhi_it] = std::minmax_element(y.begin(), y.end());
  double xlo = *xlo_it, xhi = *xhi_it, ylo = *ylo_it, yhi = *yhi_it;
  if (xhi == xlo) xhi = xlo + 1;
  if (yhi == ylo) yhi = ylo + 1;
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"420\">\n";
  svg += "<rect width=\"640\" height=\"420\" fill=\"white\"/>\n";
  svg += "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" +
         title + "</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
  for (size_t i = 0; i < x.size(); ++i) {
    const double px = pad + (x[i] - xlo) / (xhi - xlo) * (W - 2 * pad);
    const double py = H - pad - (y[i] - ylo) / (yhi - ylo) * (H - 2 * pad);
    svg += std::to_string(px) + "," + std::to_string(py) + " ";
  }
  svg += "\"/>\n</svg>\n";
  write_file_atomic(path, svg);
}

}  // namespace sw
