#include "ntk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <system_error>

namespace ntk {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

std::string text(double x, double y, const std::string& s, const char* anchor = "middle",
                 int size = 12) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\" font-family=\"sans-serif\">" + escape(s) + "</text>\n";
}

std::string open_svg(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

// Viridis-like ramp through five anchors.
std::string colormap(double t) {
  static const double anchors[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0) * 4.0;
  const int i = std::min(3, static_cast<int>(t));
  const double f = t - i;
  char buf[16];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                static_cast<int>(anchors[i][0] + f * (anchors[i + 1][0] - anchors[i][0])),
                static_cast<int>(anchors[i][1] + f * (anchors[i + 1][1] - anchors[i][1])),
                static_cast<int>(anchors[i][2] + f * (anchors[i + 1][2] - anchors[i][2])));
  return buf;
}

}  // namespace

std::string render_line_chart(const LineChart& c) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto fx = [&](double v) { return c.log_x ? std::log10(v) : v; };
  for (const auto& s : c.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (c.log_x && s.x[i] <= 0)) continue;
      x0 = std::min(x0, fx(s.x[i]));
      x1 = std::max(x1, fx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (fx(v) - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return kTop + (y1 - v) / (y1 - y0) * ph; };

  std::string out = open_svg(kWidth, kHeight);
  out += text(kWidth / 2, 20, c.title, "middle", 14);
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
         "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = y0 + (y1 - y0) * i / 4.0;
    out += text(kLeft - 6, py(yv) + 4, tick(yv), "end", 10);
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double shown = c.log_x ? std::pow(10.0, xv) : xv;
    out += text(kLeft + pw * i / 4.0, kTop + ph + 16, tick(shown), "middle", 10);
  }
  out += text(kLeft + pw / 2, kHeight - 10, c.x_label);
  out += "<text x=\"16\" y=\"" + num(kTop + ph / 2) +
         "\" font-size=\"12\" font-family=\"sans-serif\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         num(kTop + ph / 2) + ")\">" + escape(c.y_label) + "</text>\n";
  for (std::size_t si = 0; si < c.series.size(); ++si) {
    const auto& s = c.series[si];
    const char* color = kPalette[si % 8];
    std::string pts;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (c.log_x && s.x[i] <= 0)) continue;
      pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
      out += "<circle cx=\"" + num(px(s.x[i])) + "\" cy=\"" + num(py(s.y[i])) + "\" r=\"3\" fill=\"" +
             color + "\"/>\n";
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           pts + "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(si);
    out += "<line x1=\"" + num(kWidth - kRight + 10) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
           num(kWidth - kRight + 30) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    out += text(kWidth - kRight + 34, ly, s.label, "start", 11);
  }
  out += "</svg>\n";
  return out;
}

std::string render_heatmap(const Heatmap& h) {
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  const std::size_t nx = h.x_ticks.size(), ny = h.y_ticks.size();
  std::string out = open_svg(kWidth, kHeight);
  out += text(kWidth / 2, 20, h.title, "middle", 14);
  const double cw = nx ? pw / static_cast<double>(nx) : pw;
  const double ch = ny ? ph / static_cast<double>(ny) : ph;
  const double span = h.vmax > h.vmin ? h.vmax - h.vmin : 1.0;
  for (std::size_t r = 0; r < ny; ++r) {
    for (std::size_t c = 0; c < nx; ++c) {
      const double v = h.values[r][c];
      const std::string fill = std::isfinite(v) ? colormap((v - h.vmin) / span) : "#bbbbbb";
      // Row 0 at the bottom.
      const double y = kTop + ph - ch * static_cast<double>(r + 1);
      out += "<rect x=\"" + num(kLeft + cw * static_cast<double>(c)) + "\" y=\"" + num(y) +
             "\" width=\"" + num(cw) + "\" height=\"" + num(ch) + "\" fill=\"" + fill + "\"/>\n";
    }
  }
  for (std::size_t c = 0; c < nx; ++c) {
    out += text(kLeft + cw * (static_cast<double>(c) + 0.5), kTop + ph + 16, tick(h.x_ticks[c]), "middle", 10);
  }
  for (std::size_t r = 0; r < ny; ++r) {
    out += text(kLeft - 6, kTop + ph - ch * (static_cast<double>(r) + 0.5) + 4, tick(h.y_ticks[r]), "end", 10);
  }
  out += text(kLeft + pw / 2, kHeight - 10, h.x_label);
  out += text(kLeft - 40, kTop - 8, h.y_label, "middle", 12);
  // Colorbar.
  const double bx = kWidth - kRight + 20;
  for (int i = 0; i < 20; ++i) {
    out += "<rect x=\"" + num(bx) + "\" y=\"" + num(kTop + ph - ph * (i + 1) / 20.0) +
           "\" width=\"16\" height=\"" + num(ph / 20.0 + 0.5) + "\" fill=\"" + colormap(i / 19.0) + "\"/>\n";
  }
  out += text(bx + 22, kTop + ph, tick(h.vmin), "start", 10);
  out += text(bx + 22, kTop + 10, tick(h.vmax), "start", 10);
  out += "</svg>\n";
  return out;
}

namespace {

std::string cell_key(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::to_string(std::get<std::uint64_t>(c));
}

double cell_num(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return static_cast<double>(*u);
  return std::nan("");
}

// Mean of `metric` over rows grouped by (series column, x column). Non-finite
// values are skipped.
LineChart aggregate_lines(const ResultTable& t, const std::string& x_col,
                          const std::string& series_col, const std::string& metric, bool log_x,
                          const std::string& series_prefix) {
  const std::size_t xi = t.column_index(x_col), mi = t.column_index(metric);
  const std::size_t si = series_col.empty() ? xi : t.column_index(series_col);
  std::map<std::string, std::map<double, std::pair<double, int>>> acc;
  std::vector<std::string> order;
  for (const auto& row : t.rows) {
    const std::string key = series_col.empty() ? metric : series_prefix + cell_key(row[si]);
    if (!acc.count(key)) order.push_back(key);
    const double v = cell_num(row[mi]);
    auto& slot = acc[key][cell_num(row[xi])];
    if (std::isfinite(v)) {
      slot.first += v;
      slot.second += 1;
    }
  }
  LineChart c;
  c.title = metric + " (mean over reps)";
  c.x_label = x_col;
  c.y_label = metric;
  c.log_x = log_x;
  for (const auto& key : order) {
    Series s;
    s.label = key;
    for (const auto& [x, sum] : acc[key]) {
      s.x.push_back(x);
      s.y.push_back(sum.second ? sum.first / sum.second : std::nan(""));
    }
    c.series.push_back(std::move(s));
  }
  return c;
}

Heatmap aggregate_heat(const ResultTable& t, const std::string& metric, double vmin, double vmax) {
  const std::size_t ni = t.column_index("N"), nn = t.column_index("n"), mi = t.column_index(metric);
  std::map<std::pair<double, double>, std::pair<double, int>> acc;
  std::vector<double> xs, ys;
  for (const auto& row : t.rows) {
    const double x = cell_num(row[ni]), y = cell_num(row[nn]);
    xs.push_back(x);
    ys.push_back(y);
    const double v = cell_num(row[mi]);
    auto& slot = acc[{x, y}];
    if (std::isfinite(v)) {
      slot.first += v;
      slot.second += 1;
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  Heatmap h;
  h.title = metric + " (mean over reps)";
  h.x_label = "N";
  h.y_label = "n";
  h.x_ticks = xs;
  h.y_ticks = ys;
  h.vmin = vmin;
  h.vmax = vmax;
  h.values.assign(ys.size(), std::vector<double>(xs.size(), std::nan("")));
  for (std::size_t r = 0; r < ys.size(); ++r) {
    for (std::size_t c = 0; c < xs.size(); ++c) {
      const auto it = acc.find({xs[c], ys[r]});
      if (it != acc.end() && it->second.second) h.values[r][c] = it->second.first / it->second.second;
    }
  }
  return h;
}

// Stack several standalone SVG documents vertically.
std::string stack(const std::vector<std::string>& charts) {
  const double total = kHeight * static_cast<double>(charts.size());
  std::string out = open_svg(kWidth, total);
  for (std::size_t i = 0; i < charts.size(); ++i) {
    out += "<g transform=\"translate(0 " + num(kHeight * static_cast<double>(i)) + ")\">\n";
    // Drop the inner document's xml namespace wrapper but keep its body.
    const auto body_start = charts[i].find('\n') + 1;
    const auto body_end = charts[i].rfind("</svg>");
    out += charts[i].substr(body_start, body_end - body_start);
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace

std::string render_table(const ResultTable& t) {
  std::vector<std::string> charts;
  if (t.rows.empty()) return stack(charts);
  if (t.experiment == "phase_heatmap") {
    charts.push_back(render_heatmap(aggregate_heat(t, "singular", 0.0, 1.0)));
    charts.push_back(render_heatmap(aggregate_heat(t, "train_err", 0.0, 1.0)));
    charts.push_back(render_heatmap(aggregate_heat(t, "test_err_capped", 0.0, 2.0)));
  } else if (t.experiment == "gamma_match") {
    for (const char* m : {"r_nt", "r_lin", "r_prr"}) {
      charts.push_back(render_line_chart(aggregate_lines(t, "grid_val", "lambda", m, true, "lambda=")));
    }
  } else if (t.experiment == "min_eig_sweep") {
    for (const char* m : {"lambda_min", "conc_norm", "decomp_resid"}) {
      charts.push_back(render_line_chart(aggregate_lines(t, "N", "n", m, true, "n=")));
    }
  } else if (t.experiment == "nn_compare") {
    for (const char* m : {"r_nn", "r_nt", "r_prr", "dist_nn_nt"}) {
      charts.push_back(render_line_chart(aggregate_lines(t, "n", "alpha", m, false, "alpha=")));
    }
  } else if (t.experiment == "kernel_check") {
    // gamma_k against k, one series per d.
    ResultTable g;
    g.columns = {"d", "k", "gamma"};
    const std::size_t di = t.column_index("d"), ki = t.column_index("key"), vi = t.column_index("value");
    for (const auto& row : t.rows) {
      const std::string key = cell_key(row[ki]);
      if (key.rfind("gamma_", 0) != 0 || key == "gamma_above_ell") continue;
      const std::string idx = key.substr(6);
      if (idx.empty() || idx.find_first_not_of("0123456789") != std::string::npos) continue;
      g.rows.push_back({row[di], static_cast<std::int64_t>(std::stol(idx)), row[vi]});
    }
    if (!g.rows.empty()) charts.push_back(render_line_chart(aggregate_lines(g, "k", "d", "gamma", false, "d=")));
  }
  return stack(charts);
}

void emit_svg(const ResultTable& t, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::system_error(errno, std::generic_category(), "cannot open '" + path + "'");
  f << render_table(t);
  f.close();
  if (!f) throw std::system_error(errno, std::generic_category(), "write failed for '" + path + "'");
}

}  // namespace ntk
