#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mixedbo/error.hpp"
#include "mixedbo/harness.hpp"

namespace mixedbo {

namespace {

const char* const kRecordsHeader =
    "strategy,repetition,iteration,eval_config_json,observed_y,recommendation_json,regret";
const char* const kSummaryHeader = "strategy,iteration,mean_log10_regret,bootstrap_std";

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      row.clear();
      field.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorCode::InvalidArgument, "unterminated quoted CSV field");
  if (any || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " value '" + s + "'");
  }
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " value '" + s + "'");
  }
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

}  // namespace

std::string records_to_csv(const std::vector<RunRecord>& records, const SearchSpace& space) {
  std::string out = std::string(kRecordsHeader) + "\n";
  for (const auto& r : records) {
    out += csv_field(r.strategy) + ',' + std::to_string(r.repetition) + ',' +
           std::to_string(r.iteration) + ',' + csv_field(space.config_to_json(r.eval_config).dump()) +
           ',' + fmt_double(r.observed_y) + ',' +
           csv_field(space.config_to_json(r.recommendation).dump()) + ',' + fmt_double(r.regret) +
           '\n';
  }
  return out;
}

std::vector<RunRecord> records_from_csv(const std::string& text, const SearchSpace& space) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows[0].size() != 7) {
    throw Error(ErrorCode::InvalidArgument, std::string("records CSV must start with '") +
                                                kRecordsHeader + "'");
  }
  std::vector<RunRecord> records;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 7) {
      throw Error(ErrorCode::InvalidArgument, "records CSV row " + std::to_string(i) + " has " +
                                                  std::to_string(row.size()) + " fields");
    }
    RunRecord r;
    r.strategy = row[0];
    r.repetition = parse_int(row[1], "repetition");
    r.iteration = parse_int(row[2], "iteration");
    try {
      r.eval_config = space.config_from_json(nlohmann::json::parse(row[3]));
      r.recommendation = space.config_from_json(nlohmann::json::parse(row[5]));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::InvalidArgument,
                  "records CSV row " + std::to_string(i) + ": bad config JSON: " + e.what());
    }
    r.observed_y = parse_double(row[4], "observed_y");
    r.regret = parse_double(row[6], "regret");
    records.push_back(std::move(r));
  }
  return records;
}

std::string summary_to_csv(const CurveSummary& summary) {
  std::string out = std::string(kSummaryHeader) + "\n";
  for (const auto& p : summary.points) {
    out += csv_field(p.strategy) + ',' + std::to_string(p.iteration) + ',' +
           fmt_double(p.mean_log10_regret) + ',' + fmt_double(p.bootstrap_std) + '\n';
  }
  return out;
}

std::string summary_to_svg(const CurveSummary& summary, const std::string& title) {
  constexpr double W = 800, H = 500, L = 70, R = 150, T = 40, B = 50;
  static const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                        "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::vector<std::string> strategies;
  int max_iter = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : summary.points) {
    if (std::find(strategies.begin(), strategies.end(), p.strategy) == strategies.end()) {
      strategies.push_back(p.strategy);
    }
    max_iter = std::max(max_iter, p.iteration);
    lo = std::min(lo, p.mean_log10_regret - p.bootstrap_std);
    hi = std::max(hi, p.mean_log10_regret + p.bootstrap_std);
  }
  if (!(lo < hi)) {
    lo = (std::isfinite(lo) ? lo : 0.0) - 1.0;
    hi = lo + 2.0;
  }
  const auto sx = [&](double it) {
    return max_iter == 1 ? L : L + (it - 1.0) / (max_iter - 1.0) * (W - L - R);
  };
  const auto sy = [&](double v) { return T + (hi - v) / (hi - lo) * (H - T - B); };
  const auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << xml_escape(title) << "</text>\n"
      << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    svg << "<text x=\"" << L - 6 << "\" y=\"" << num(sy(v) + 4) << "\" text-anchor=\"end\" "
        << "font-family=\"sans-serif\" font-size=\"11\">" << num(v) << "</text>\n";
  }
  svg << "<text x=\"" << L << "\" y=\"" << H - B + 18 << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">1</text>\n"
      << "<text x=\"" << W - R << "\" y=\"" << H - B + 18 << "\" text-anchor=\"end\" "
      << "font-family=\"sans-serif\" font-size=\"11\">" << max_iter << "</text>\n"
      << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"12\">iteration</text>\n";

  for (std::size_t s = 0; s < strategies.size(); ++s) {
    const char* color = palette[s % (sizeof palette / sizeof palette[0])];
    std::vector<const CurvePoint*> pts;
    for (const auto& p : summary.points) {
      if (p.strategy == strategies[s]) pts.push_back(&p);
    }
    std::sort(pts.begin(), pts.end(),
              [](const CurvePoint* a, const CurvePoint* b) { return a->iteration < b->iteration; });
    std::string band, line;
    for (const auto* p : pts) {
      band += num(sx(p->iteration)) + ',' + num(sy(p->mean_log10_regret + p->bootstrap_std)) + ' ';
      line += num(sx(p->iteration)) + ',' + num(sy(p->mean_log10_regret)) + ' ';
    }
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      band += num(sx((*it)->iteration)) + ',' +
              num(sy((*it)->mean_log10_regret - (*it)->bootstrap_std)) + ' ';
    }
    svg << "<polygon points=\"" << band << "\" fill=\"" << color
        << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n"
        << "<polyline points=\"" << line << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 20 * (s + 1) << "\" fill=\"" << color
        << "\" font-family=\"sans-serif\" font-size=\"13\">" << xml_escape(strategies[s])
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

}  // namespace mixedbo
