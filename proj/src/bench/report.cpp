#include "slideopt/bench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace slideopt::bench {

std::string format_double(double v) {
  char buf[64];
  // %.17g round-trips; trim to the shortest representation that still does.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void Report::recompute_aggregates() {
  std::map<double, std::vector<const ReportRow*>> groups;
  for (const ReportRow& r : rows) groups[r.k_or_epsilon].push_back(&r);
  aggregates.clear();
  for (const auto& [key, group] : groups) {
    Aggregate a;
    a.k_or_epsilon = key;
    a.trials = static_cast<int>(group.size());
    double sum = 0, sum_sq = 0, bsum = 0, g = 0, s = 0, st = 0;
    for (const ReportRow* r : group) {
      sum += r->gap;
      sum_sq += r->gap * r->gap;
      bsum += r->bound;
      g += static_cast<double>(r->grad_calls);
      s += static_cast<double>(r->subgrad_calls);
      st += static_cast<double>(r->stoch_calls);
    }
    const double n = static_cast<double>(a.trials);
    a.mean_gap = sum / n;
    const double var = std::max(0.0, sum_sq / n - a.mean_gap * a.mean_gap);
    a.se_gap = a.trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
    a.mean_bound = bsum / n;
    a.mean_grad = g / n;
    a.mean_subgrad = s / n;
    a.mean_stoch = st / n;
    aggregates.push_back(a);
  }
}

std::string to_csv(const Report& report) {
  std::ostringstream out;
  out << "trial_seed,algorithm,policy,k_or_epsilon,gap,bound,grad_calls,"
         "subgrad_calls,stoch_calls,elapsed_ms\n";
  for (const ReportRow& r : report.rows) {
    out << r.trial_seed << ',' << r.algorithm << ',' << r.policy << ','
        << format_double(r.k_or_epsilon) << ',' << format_double(r.gap) << ','
        << format_double(r.bound) << ',' << r.grad_calls << ','
        << r.subgrad_calls << ',' << r.stoch_calls << ','
        << format_double(r.elapsed_ms) << '\n';
  }
  return out.str();
}

std::vector<ReportRow> parse_csv(const std::string& text) {
  std::vector<ReportRow> rows;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 10) throw std::invalid_argument("csv: malformed row");
    ReportRow r;
    r.trial_seed = std::stoull(cells[0]);
    r.algorithm = cells[1];
    r.policy = cells[2];
    r.k_or_epsilon = std::stod(cells[3]);
    r.gap = std::stod(cells[4]);
    r.bound = std::stod(cells[5]);
    r.grad_calls = std::stoll(cells[6]);
    r.subgrad_calls = std::stoll(cells[7]);
    r.stoch_calls = std::stoll(cells[8]);
    r.elapsed_ms = std::stod(cells[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string to_json(const Report& report) {
  nlohmann::json j;
  j["config"] = report.config_echo;
  j["bounds_hold"] = report.bounds_hold;
  if (!report.slopes.empty()) j["slopes"] = report.slopes;
  auto& aggs = j["aggregates"] = nlohmann::json::array();
  for (const Aggregate& a : report.aggregates) {
    aggs.push_back({{"k_or_epsilon", a.k_or_epsilon},
                    {"trials", a.trials},
                    {"mean_gap", a.mean_gap},
                    {"se_gap", a.se_gap},
                    {"mean_bound", a.mean_bound},
                    {"mean_grad_calls", a.mean_grad},
                    {"mean_subgrad_calls", a.mean_subgrad},
                    {"mean_stoch_calls", a.mean_stoch}});
  }
  j["trials"] = report.rows.empty()
                    ? 0
                    : static_cast<int>(report.rows.size() /
                                       std::max<size_t>(1, report.aggregates.size()));
  return j.dump(2);
}

std::string to_svg(const Report& report) {
  // Mean gap (and mean bound) against the checkpoint axis, log-log.
  const int w = 640, h = 420, ml = 60, mb = 40, mt = 20, mr = 20;
  std::vector<double> xs, ys, bs;
  for (const Aggregate& a : report.aggregates) {
    if (a.k_or_epsilon > 0 && a.mean_gap > 0) {
      xs.push_back(std::log10(a.k_or_epsilon));
      ys.push_back(std::log10(std::max(a.mean_gap, 1e-300)));
      bs.push_back(std::log10(std::max(a.mean_bound, 1e-300)));
    }
  }
  std::ostringstream out;
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << w << "' height='"
      << h << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  if (xs.size() >= 2) {
    const auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
    double ymin = 1e300, ymax = -1e300;
    for (double v : ys) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    for (double v : bs) ymin = std::min(ymin, v), ymax = std::max(ymax, v);
    const double xr = std::max(1e-9, *xmax_it - *xmin_it);
    const double yr = std::max(1e-9, ymax - ymin);
    auto px = [&](double x) { return ml + (x - *xmin_it) / xr * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / yr * (h - mb - mt); };
    auto polyline = [&](const std::vector<double>& vals, const char* color) {
      out << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
      for (size_t i = 0; i < xs.size(); ++i)
        out << px(xs[i]) << ',' << py(vals[i]) << ' ';
      out << "'/>\n";
    };
    polyline(ys, "#cc3311");
    polyline(bs, "#004488");
    out << "<text x='" << ml << "' y='" << mt
        << "' font-size='12'>log10 gap (red) and bound (blue) vs log10 checkpoint</text>\n";
    out << "<line x1='" << ml << "' y1='" << (h - mb) << "' x2='" << (w - mr)
        << "' y2='" << (h - mb) << "' stroke='black'/>\n";
    out << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
        << (h - mb) << "' stroke='black'/>\n";
  } else {
    out << "<text x='20' y='40' font-size='12'>not enough data</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_report_files(const Report& report, const std::string& out_dir,
                        const std::vector<std::string>& formats,
                        const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  for (const std::string& f : formats) {
    const fs::path path = fs::path(out_dir) / (stem + "." + f);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (f == "csv")
      out << to_csv(report);
    else if (f == "json")
      out << to_json(report);
    else if (f == "svg")
      out << to_svg(report);
    else
      throw std::invalid_argument("unknown format '" + f + "'");
  }
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_slope: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace slideopt::bench
