#include "rrsgd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace rrsgd {

namespace {

// Shortest round-trip representation, locale-independent.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_preamble(std::uint64_t seed) {
  std::ostringstream os;
  os << "# " << kToolVersion << " seed=" << seed << "\n";
  return os.str();
}

}  // namespace

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows,
                              std::uint64_t master_seed) {
  std::ostringstream os;
  os << csv_preamble(master_seed);
  os << "family,schedule,alpha,n,K,trials,mean,half_width,exited_frac,seed\n";
  for (const auto& r : rows)
    os << r.family << ',' << r.schedule << ',' << fmt(r.alpha) << ',' << r.n << ','
       << r.K << ',' << r.trials << ',' << fmt(r.mean) << ',' << fmt(r.half_width)
       << ',' << fmt(r.exited_frac) << ',' << r.seed << '\n';
  return os.str();
}

std::string recurrence_rows_to_csv(const std::vector<RecurrenceCheckRow>& rows,
                                   std::uint64_t seed) {
  std::ostringstream os;
  os << csv_preamble(seed);
  os << "draw_id,lemma,K,oracle,bound,slack\n";
  for (const auto& r : rows)
    os << r.draw_id << ',' << r.lemma << ',' << r.K << ',' << fmt(r.oracle) << ','
       << fmt(r.bound) << ',' << fmt(r.slack) << '\n';
  return os.str();
}

std::string progress_rows_to_csv(const std::vector<ProgressCheckRow>& rows,
                                 std::uint64_t seed) {
  std::ostringstream os;
  os << csv_preamble(seed);
  os << "family,problem_seed,check,index,eta,lhs,rhs,holds_within_ci,"
        "confirmed_violation,inconclusive\n";
  for (const auto& r : rows)
    os << r.family << ',' << r.problem_seed << ',' << r.check << ',' << r.index
       << ',' << fmt(r.eta) << ',' << fmt(r.lhs) << ',' << fmt(r.rhs) << ','
       << (r.holds_within_ci ? 1 : 0) << ',' << (r.confirmed_violation ? 1 : 0)
       << ',' << (r.inconclusive ? 1 : 0) << '\n';
  return os.str();
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw std::runtime_error("CSV has no column named '" + name + "'");
  return static_cast<int>(it - header.begin());
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size())
      throw std::runtime_error("CSV line " + std::to_string(lineno) + ": expected " +
                               std::to_string(table.header.size()) + " fields, got " +
                               std::to_string(fields.size()));
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw std::runtime_error("CSV has no header line");
  return table;
}

std::vector<GroupedFit> fit_csv(const CsvTable& table,
                                const std::vector<std::string>& group_by,
                                const std::string& scale_column,
                                const std::string& value_column) {
  const int scale_col = table.column(scale_column);
  const int value_col = table.column(value_column);
  std::vector<int> group_cols;
  for (const auto& g : group_by) group_cols.push_back(table.column(g));

  std::map<std::vector<std::string>, std::vector<std::pair<double, double>>> groups;
  int lineno = 0;
  for (const auto& row : table.rows) {
    ++lineno;
    std::vector<std::string> key;
    for (int c : group_cols) key.push_back(row[c]);
    double scale, value;
    try {
      scale = std::stod(row[scale_col]);
      value = std::stod(row[value_col]);
    } catch (const std::exception&) {
      throw std::runtime_error("CSV data row " + std::to_string(lineno) +
                               ": non-numeric scale or value field");
    }
    groups[key].emplace_back(scale, value);
  }

  std::vector<GroupedFit> fits;
  for (const auto& [key, pts] : groups) {
    GroupedFit g;
    for (std::size_t i = 0; i < group_by.size(); ++i) g.group[group_by[i]] = key[i];
    g.fit = fit_rate(pts);
    fits.push_back(std::move(g));
  }
  return fits;
}

namespace {

const char* kSeriesColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                               "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

std::string svg_loglog_chart(const std::vector<SvgSeries>& series,
                             const std::string& x_label,
                             const std::string& y_label, int width, int height) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!(x > 0.0 && y > 0.0))
        throw std::invalid_argument("svg_loglog_chart: points must be positive");
      xmin = std::min(xmin, std::log10(x));
      xmax = std::max(xmax, std::log10(x));
      ymin = std::min(ymin, std::log10(y));
      ymax = std::max(ymax, std::log10(y));
    }
  if (xmin > xmax) throw std::invalid_argument("svg_loglog_chart: no points");
  if (xmax - xmin < 1e-9) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-9) ymax = ymin + 1.0;

  const double ml = 70, mr = 20, mt = 20, mb = 50;  // margins
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double ly) { return mt + (ymax - ly) / (ymax - ymin) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
     << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Decade ticks.
  for (int e = static_cast<int>(std::ceil(xmin)); e <= std::floor(xmax); ++e) {
    const double x = px(e);
    os << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x
       << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << mt + ph + 20
       << "\" font-size=\"11\" text-anchor=\"middle\">1e" << e << "</text>\n";
  }
  for (int e = static_cast<int>(std::ceil(ymin)); e <= std::floor(ymax); ++e) {
    const double y = py(e);
    os << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml
       << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
       << "\" font-size=\"11\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
     << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
  os << "<text x=\"14\" y=\"" << mt + ph / 2
     << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << mt + ph / 2 << ")\">" << y_label << "</text>\n";

  int idx = 0;
  for (const auto& s : series) {
    const char* color = kSeriesColors[idx % 8];
    std::vector<std::pair<double, double>> pts = s.points;
    std::sort(pts.begin(), pts.end());
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : pts)
      os << px(std::log10(x)) << ',' << py(std::log10(y)) << ' ';
    os << "\"/>\n";
    for (const auto& [x, y] : pts)
      os << "<circle cx=\"" << px(std::log10(x)) << "\" cy=\"" << py(std::log10(y))
         << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    os << "<rect x=\"" << ml + pw - 160 << "\" y=\"" << mt + 8 + 16 * idx
       << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << ml + pw - 143 << "\" y=\"" << mt + 18 + 16 * idx
       << "\" font-size=\"11\">" << s.label << "</text>\n";
    ++idx;
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rrsgd
