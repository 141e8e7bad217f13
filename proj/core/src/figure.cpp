#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "aitlab/errors.hpp"
#include "aitlab/temporal_value.hpp"

namespace aitlab {
namespace {

std::string num(double x, int digits = 17) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw InvalidArgument("failed writing " + path.string());
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string sweep_csv(const SweepTable& table) {
  std::string out = "param_name,param_value,d_star_or_inf,residual\n";
  const std::string name = axis_name(table.axis);
  for (const auto& row : table.rows) {
    out += name + ',' + num(row.param_value) + ',' + (row.result.finite() ? num(row.result.d_star) : "inf") + ',' +
           num(row.result.residual) + '\n';
  }
  return out;
}

std::string sweep_svg(std::span<const SweepTable> tables, const std::string& title) {
  if (tables.empty()) throw InvalidArgument("sweep_svg: no tables");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymax = 0.0;
  for (const auto& t : tables) {
    if (t.rows.empty()) throw InvalidArgument("sweep_svg: empty table");
    for (const auto& r : t.rows) {
      xmin = std::min(xmin, r.param_value);
      xmax = std::max(xmax, r.param_value);
      if (r.result.finite()) ymax = std::max(ymax, r.result.d_star);
    }
  }
  if (ymax <= 0.0) ymax = 1.0;
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  const double W = 640, H = 420, L = 70, R = 150, Tm = 40, B = 60;
  const double pw = W - L - R, ph = H - Tm - B;
  auto sx = [&](double x) { return L + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return Tm + ph - y / ymax * ph; };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    s << "<text x=\"" << L + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
      << xml_escape(title) << "</text>\n";
  }
  s << "<g stroke=\"black\" fill=\"none\"><line x1=\"" << L << "\" y1=\"" << Tm + ph << "\" x2=\"" << L + pw
    << "\" y2=\"" << Tm + ph << "\"/><line x1=\"" << L << "\" y1=\"" << Tm << "\" x2=\"" << L << "\" y2=\""
    << Tm + ph << "\"/></g>\n";
  s << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = xmin + (xmax - xmin) * k / 4, yv = ymax * k / 4;
    s << "<text x=\"" << sx(xv) << "\" y=\"" << Tm + ph + 16 << "\" text-anchor=\"middle\">" << num(xv, 4)
      << "</text>\n";
    s << "<text x=\"" << L - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << num(yv, 4) << "</text>\n";
  }
  s << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << axis_name(tables.front().axis) << "</text>\n";
  s << "<text transform=\"translate(18," << Tm + ph / 2
    << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">d*</text>\n</g>\n";

  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto& t = tables[k];
    const char* color = kPalette[k % std::size(kPalette)];
    // Each run of finite rows becomes its own polyline; Infinite rows leave gaps.
    std::vector<std::vector<std::pair<double, double>>> runs(1);
    for (const auto& r : t.rows) {
      if (r.result.finite()) {
        runs.back().emplace_back(sx(r.param_value), sy(r.result.d_star));
      } else if (!runs.back().empty()) {
        runs.emplace_back();
      }
    }
    for (const auto& run : runs) {
      if (run.empty()) continue;
      if (run.size() == 1) {
        s << "<circle cx=\"" << run[0].first << "\" cy=\"" << run[0].second << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
        continue;
      }
      s << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << color << "\" points=\"";
      for (const auto& [x, y] : run) s << x << ',' << y << ' ';
      s << "\"/>\n";
    }
    const double ly = Tm + 14 + 18 * static_cast<double>(k);
    s << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 32 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/><text x=\"" << L + pw + 36 << "\" y=\"" << ly + 4
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << xml_escape(t.label.empty() ? "series" : t.label)
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

FigureFiles emit_figure(std::span<const SweepTable> tables, const std::filesystem::path& csv_stem,
                        const std::filesystem::path& svg_path, const std::string& title) {
  if (tables.empty()) throw InvalidArgument("emit_figure: no tables");
  FigureFiles files;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    auto p = csv_stem;
    p += tables.size() == 1 ? std::string(".csv") : "_" + std::to_string(k) + ".csv";
    write_file(p, sweep_csv(tables[k]));
    files.csv.push_back(p);
  }
  files.svg = svg_path;
  write_file(files.svg, sweep_svg(tables, title));
  return files;
}

}  // namespace aitlab
