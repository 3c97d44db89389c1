#include "ttortho/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>

#include "file_util.hpp"
#include "ttortho/errors.hpp"
#include "ttortho/metrics.hpp"

namespace ttortho {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 600;
constexpr double kLeft = 80;
constexpr double kRight = 610;
constexpr double kTop = 50;
constexpr double kBottom = 530;

struct Point {
  double x;
  double y;
};

struct Series {
  std::string label;
  std::string color;
  std::vector<Point> points;
  bool dash_above_one = false;
  bool reference = false;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string color_for(const std::string& name) {
  static const std::map<std::string, std::string> colors = {
      {"cgs", "#1f77b4"},           {"mgs", "#ff7f0e"},           {"cgs2", "#2ca02c"},
      {"mgs2", "#d62728"},          {"gram", "#9467bd"},          {"householder", "#8c564b"},
      {"householder:u", "#e377c2"}, {"householder:a", "#7f7f7f"},
  };
  const auto it = colors.find(name);
  return it == colors.end() ? "#333333" : it->second;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<double> value_of(PlotKind kind, const CsvRecord& r) {
  switch (kind) {
    case PlotKind::loo: return r.loo;
    case PlotKind::max_rank:
      return r.max_rank ? std::optional<double>(static_cast<double>(*r.max_rank)) : std::nullopt;
    case PlotKind::compression_ratio: return r.compression_ratio;
    case PlotKind::compression_gain: return r.compression_gain;
  }
  return std::nullopt;
}

bool plottable(double v) { return std::isfinite(v) && v > 0.0; }

std::vector<Series> collect(PlotKind kind, double delta, std::span<const CsvRecord> records) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<Point>> by_kernel;
  std::map<std::size_t, Conditioning> kappa;
  for (const CsvRecord& r : records) {
    if (r.delta != delta || !r.error.empty()) continue;
    if (kind == PlotKind::loo && r.kernel.find(':') != std::string::npos) continue;
    const std::optional<double> v = value_of(kind, r);
    if (!v) continue;
    if (!by_kernel.count(r.kernel)) order.push_back(r.kernel);
    by_kernel[r.kernel].push_back({static_cast<double>(r.k), *v});
    if (r.kappa && r.kappa_sq && !kappa.count(r.k)) kappa[r.k] = {*r.kappa, *r.kappa_sq};
  }

  std::vector<Series> out;
  for (const std::string& name : order) {
    Series s{name, color_for(name), by_kernel[name], kind == PlotKind::loo, false};
    std::stable_sort(s.points.begin(), s.points.end(),
                     [](const Point& a, const Point& b) { return a.x < b.x; });
    out.push_back(std::move(s));
  }
  if (out.empty() || kind != PlotKind::loo) return out;

  double kmin = out.front().points.front().x;
  double kmax = kmin;
  for (const Series& s : out)
    for (const Point& p : s.points) {
      kmin = std::min(kmin, p.x);
      kmax = std::max(kmax, p.x);
    }
  out.push_back({"delta", "#000000", {{kmin, delta}, {kmax, delta}}, false, true});
  if (!kappa.empty()) {
    Series uk{"u*kappa", "#17becf", {}, false, true};
    Series uk2{"u*kappa^2", "#bcbd22", {}, false, true};
    for (const auto& [k, c] : kappa) {
      uk.points.push_back({static_cast<double>(k), kUnitRoundoff * c.kappa});
      uk2.points.push_back({static_cast<double>(k), kUnitRoundoff * c.kappa_sq});
    }
    out.push_back(std::move(uk));
    out.push_back(std::move(uk2));
  } else if (by_kernel.count("mgs")) {
    Series proxy{"mgs loo^2", "#bcbd22", {}, false, true};
    for (const Point& p : by_kernel["mgs"]) proxy.points.push_back({p.x, p.y * p.y});
    std::stable_sort(proxy.points.begin(), proxy.points.end(),
                     [](const Point& a, const Point& b) { return a.x < b.x; });
    out.push_back(std::move(proxy));
  }
  return out;
}

}  // namespace

std::string_view plot_kind_name(PlotKind kind) {
  switch (kind) {
    case PlotKind::loo: return "loo";
    case PlotKind::max_rank: return "max_rank";
    case PlotKind::compression_ratio: return "compression_ratio";
    case PlotKind::compression_gain: return "compression_gain";
  }
  return "unknown";
}

std::string render_plot(PlotKind kind, double delta, std::span<const CsvRecord> records) {
  const std::vector<Series> series = collect(kind, delta, records);

  double xmin = 0, xmax = 0, vmin = 0, vmax = 0;
  bool any = false;
  for (const Series& s : series)
    for (const Point& p : s.points) {
      if (!plottable(p.y)) continue;
      if (!any) {
        xmin = xmax = p.x;
        vmin = vmax = p.y;
        any = true;
      }
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      vmin = std::min(vmin, p.y);
      vmax = std::max(vmax, p.y);
    }
  if (!any)
    throw SchemaError("plot: no " + std::string(plot_kind_name(kind)) + " values for delta " +
                      format_double(delta));

  const int lo = static_cast<int>(std::floor(std::log10(vmin)));
  int hi = static_cast<int>(std::ceil(std::log10(vmax)));
  if (hi <= lo) hi = lo + 1;
  if (xmax <= xmin) xmax = xmin + 1;

  auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
  auto py = [&](double y) {
    return kBottom - (std::log10(y) - lo) / static_cast<double>(hi - lo) * (kBottom - kTop);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
         "\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + fmt((kLeft + kRight) / 2) +
         "\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         std::string(plot_kind_name(kind)) + ", delta = " + format_double(delta) + "</text>\n";

  svg += "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
  const int step = std::max(1, (hi - lo + 9) / 10);
  for (int e = lo; e <= hi; e += step)
    svg += "<line x1=\"" + fmt(kLeft) + "\" y1=\"" + fmt(py(std::pow(10.0, e))) + "\" x2=\"" +
           fmt(kRight) + "\" y2=\"" + fmt(py(std::pow(10.0, e))) + "\"/>\n";
  svg += "</g>\n";
  svg += "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">\n";
  for (int e = lo; e <= hi; e += step)
    svg += "<text x=\"" + fmt(kLeft - 6) + "\" y=\"" + fmt(py(std::pow(10.0, e)) + 4) +
           "\">1e" + std::to_string(e) + "</text>\n";
  svg += "</g>\n";

  const double span = xmax - xmin;
  const double xstep = std::max(1.0, std::ceil(span / 10.0));
  svg += "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n";
  for (double x = xmin; x <= xmax + 1e-9; x += xstep)
    svg += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(kBottom + 18) + "\">" +
           std::to_string(static_cast<long long>(std::llround(x))) + "</text>\n";
  svg += "<text x=\"" + fmt((kLeft + kRight) / 2) + "\" y=\"" + fmt(kBottom + 42) +
         "\">k</text>\n";
  svg += "</g>\n";
  svg += "<rect x=\"" + fmt(kLeft) + "\" y=\"" + fmt(kTop) + "\" width=\"" + fmt(kRight - kLeft) +
         "\" height=\"" + fmt(kBottom - kTop) + "\" fill=\"none\" stroke=\"#000000\"/>\n";

  for (const Series& s : series) {
    std::vector<Point> pts;
    for (const Point& p : s.points)
      if (plottable(p.y)) pts.push_back(p);
    if (pts.empty()) continue;
    const std::string dash_ref = s.reference ? " stroke-dasharray=\"2 3\"" : "";
    std::size_t start = 0;
    while (start + 1 < pts.size()) {
      auto dashed = [&](std::size_t i) {
        return s.dash_above_one && (pts[i].y > 1.0 || pts[i + 1].y > 1.0);
      };
      const bool style = dashed(start);
      std::size_t end = start + 1;
      while (end + 1 < pts.size() && dashed(end) == style) ++end;
      svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\"";
      svg += style ? " stroke-dasharray=\"6 4\" stroke-opacity=\"0.5\"" : dash_ref;
      svg += " points=\"";
      for (std::size_t i = start; i <= end; ++i) {
        if (i > start) svg += ' ';
        svg += fmt(px(pts[i].x)) + "," + fmt(py(pts[i].y));
      }
      svg += "\"/>\n";
      start = end;
    }
    if (!s.reference)
      for (const Point& p : pts)
        svg += "<circle cx=\"" + fmt(px(p.x)) + "\" cy=\"" + fmt(py(p.y)) + "\" r=\"2\" fill=\"" +
               s.color + "\"" + (s.dash_above_one && p.y > 1.0 ? " fill-opacity=\"0.5\"" : "") +
               "/>\n";
  }

  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  double ly = kTop + 10;
  for (const Series& s : series) {
    svg += "<line x1=\"625\" y1=\"" + fmt(ly) + "\" x2=\"655\" y2=\"" + fmt(ly) + "\" stroke=\"" +
           s.color + "\" stroke-width=\"1.5\"" + (s.reference ? " stroke-dasharray=\"2 3\"" : "") +
           "/>\n";
    svg += "<text x=\"662\" y=\"" + fmt(ly + 4) + "\">" + escape(s.label) + "</text>\n";
    ly += 18;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

std::vector<std::filesystem::path> write_plots(std::span<const CsvRecord> records,
                                               const std::filesystem::path& dir) {
  std::vector<double> deltas;
  for (const CsvRecord& r : records)
    if (std::find(deltas.begin(), deltas.end(), r.delta) == deltas.end()) deltas.push_back(r.delta);
  if (deltas.empty()) throw SchemaError("plot: csv has no rows");

  std::vector<std::filesystem::path> written;
  for (double delta : deltas)
    for (PlotKind kind : {PlotKind::loo, PlotKind::max_rank, PlotKind::compression_ratio,
                          PlotKind::compression_gain}) {
      std::string svg;
      try {
        svg = render_plot(kind, delta, records);
      } catch (const SchemaError&) {
        if (kind == PlotKind::loo) throw;
        continue;
      }
      const std::filesystem::path path =
          dir / (std::string(plot_kind_name(kind)) + "_delta" + format_double(delta) + ".svg");
      detail::write_text_file(path, svg);
      written.push_back(path);
    }
  return written;
}

}  // namespace ttortho
