#include "ide/output.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ide/errors.hpp"

namespace ide {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  return os;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir + ": " + ec.message());
}

void write_table(const std::string& path, const std::vector<std::string>& columns,
                 const std::vector<std::vector<double>>& rows) {
  auto os = open_out(path);
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n' << std::setprecision(17);
  for (const auto& row : rows) {
    if (row.size() != columns.size()) throw InvalidArgument("row width does not match header in " + path);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      if (!std::isnan(row[c])) os << row[c];
    }
    os << '\n';
  }
}

void write_svg(const std::string& path, const PlotSpec& spec, const std::vector<PlotSeries>& series) {
  constexpr double W = 720.0, H = 440.0, L = 70.0, R = 150.0, T = 40.0, B = 50.0;
  auto ty = [&](double y) { return spec.log_y ? std::log10(y) : y; };
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (spec.log_y && !(s.y[i] > 0.0))) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, ty(s.y[i]));
      y1 = std::max(y1, ty(s.y[i]));
    }
  }
  if (!std::isfinite(x0)) {
    x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (ty(y) - y0) / (y1 - y0) * (H - T - B); };

  auto os = open_out(path);
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape_xml(spec.title) << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0;
    const double yv = y0 + (y1 - y0) * k / 4.0;
    const double X = L + (W - L - R) * k / 4.0;
    const double Y = H - B - (H - T - B) * k / 4.0;
    os << "<text x=\"" << X << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << xv << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << Y + 4 << "\" text-anchor=\"end\">"
       << (spec.log_y ? "1e" : "") << (spec.log_y ? std::round(yv * 10) / 10 : yv) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape_xml(spec.x_label)
     << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << (T + H - B) / 2 << ")\">" << escape_xml(spec.y_label) << "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    std::ostringstream d;
    d << std::setprecision(6);
    bool pen = false;
    for (std::size_t i = 0; i < series[s].x.size() && i < series[s].y.size(); ++i) {
      const double y = series[s].y[i];
      if (!std::isfinite(y) || (spec.log_y && !(y > 0.0))) {
        pen = false;
        continue;
      }
      d << (pen ? " L" : " M") << px(series[s].x[i]) << ',' << py(y);
      pen = true;
    }
    os << "<path d=\"" << d.str() << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(s) + 10.0;
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly << "\" stroke=\""
       << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 35 << "\" y=\"" << ly + 4 << "\">" << escape_xml(series[s].label) << "</text>\n";
  }
  os << "</svg>\n";
}

void write_manifest(const std::string& dir, const Manifest& m) {
  Json j;
  j["tool"] = "idespread";
  j["version"] = kVersion;
  j["compiler"] = __VERSION__;
  j["status"] = m.status;
  j["exit_code"] = m.exit_code;
  j["wall_seconds"] = m.wall_seconds;
  j["config"] = m.config;
  j["outputs"] = m.outputs;
  j["results"] = m.results;
  auto os = open_out((std::filesystem::path(dir) / "manifest.json").string());
  os << j.dump(2) << '\n';
}

}  // namespace ide
