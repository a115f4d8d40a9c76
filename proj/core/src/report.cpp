#include "dadprune/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dadprune/error.hpp"

namespace dadprune {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 64.0;
constexpr double kRight = 150.0;  // room for the legend
constexpr double kTop = 30.0;
constexpr double kBottom = 52.0;

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Linear map from data coordinates onto the plot area.
struct Frame {
  double x0, x1, y0, y1;

  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

const std::string& f4(double v, std::string& buf) { return buf = format_fixed4(v); }

void svg_open(std::ostringstream& out, std::string_view title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
}

void svg_axes(std::ostringstream& out, const Frame& f, std::string_view x_label, std::string_view y_label,
              int x_ticks, int y_ticks) {
  std::string a, b, c, d;
  out << "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << f4(f.px(f.x0), a) << "\" y1=\"" << f4(f.py(f.y0), b) << "\" x2=\"" << f4(f.px(f.x1), c)
      << "\" y2=\"" << f4(f.py(f.y0), d) << "\"/>\n";
  out << "<line x1=\"" << f4(f.px(f.x0), a) << "\" y1=\"" << f4(f.py(f.y0), b) << "\" x2=\"" << f4(f.px(f.x0), c)
      << "\" y2=\"" << f4(f.py(f.y1), d) << "\"/>\n";
  out << "</g>\n<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"10\">\n";
  for (int i = 0; i <= x_ticks; ++i) {
    const double v = f.x0 + (f.x1 - f.x0) * i / x_ticks;
    out << "<text x=\"" << f4(f.px(v), a) << "\" y=\"" << f4(f.py(f.y0) + 14.0, b)
        << "\" text-anchor=\"middle\">" << format_fixed4(v) << "</text>\n";
  }
  for (int i = 0; i <= y_ticks; ++i) {
    const double v = f.y0 + (f.y1 - f.y0) * i / y_ticks;
    out << "<text x=\"" << f4(f.px(f.x0) - 4.0, a) << "\" y=\"" << f4(f.py(v) + 3.0, b)
        << "\" text-anchor=\"end\">" << format_fixed4(v) << "</text>\n";
  }
  out << "</g>\n";
  out << "<text class=\"x-label\" x=\"" << f4((f.px(f.x0) + f.px(f.x1)) / 2.0, a) << "\" y=\""
      << f4(kHeight - 12.0, b) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << xml_escape(x_label) << "</text>\n";
  out << "<text class=\"y-label\" x=\"14\" y=\"" << f4((f.py(f.y0) + f.py(f.y1)) / 2.0, a)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 14 "
      << f4((f.py(f.y0) + f.py(f.y1)) / 2.0, b) << ")\">" << xml_escape(y_label) << "</text>\n";
}

std::string_view band_color(Band b) {
  switch (b) {
    case Band::hard: return "#d7301f";
    case Band::ambiguous: return "#31a354";
    case Band::easy: return "#3182bd";
  }
  return "black";
}

double quantize4(double v) { return std::strtod(format_fixed4(v).c_str(), nullptr); }

}  // namespace

std::string format_fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

void write_chart(const std::filesystem::path& prefix, const Chart& chart) {
  for (const auto& [ext, body] : {std::pair{".csv", &chart.csv}, std::pair{".svg", &chart.svg}}) {
    const std::filesystem::path path = prefix.string() + ext;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_failure, "cannot open '" + path.string() + "' for writing");
    out << *body;
    if (!out) throw Error(Errc::io_failure, "write to '" + path.string() + "' failed");
  }
}

std::string_view band_name(Band b) {
  switch (b) {
    case Band::hard: return "hard";
    case Band::ambiguous: return "ambiguous";
    case Band::easy: return "easy";
  }
  return "unknown";
}

std::vector<DataMapPoint> data_map_points(const DynamicsSnapshot& snap, double p) {
  if (snap.points.empty()) throw Error(Errc::empty_input, "snapshot has no samples");
  const Ranking ranking = rank(snap);
  const std::size_t n = ranking.size();
  const std::size_t hard_trim = ambiguous_low_trim(n, p);
  const std::size_t keep = kept_count(n, p);
  std::vector<DataMapPoint> out;
  out.reserve(n);
  for (const auto& point : snap.points) out.push_back({point.sample_id, point.sigma, point.mu, Band::ambiguous});
  // Ranked positions -> bands; snapshot order is by id, so map through ids.
  std::vector<std::pair<std::string, Band>> bands;
  bands.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Band b = i < hard_trim ? Band::hard : (i < hard_trim + keep ? Band::ambiguous : Band::easy);
    bands.emplace_back(ranking.entries[i].sample_id, b);
  }
  std::sort(bands.begin(), bands.end());
  for (auto& point : out) {
    auto it = std::lower_bound(bands.begin(), bands.end(), std::pair{point.sample_id, Band::hard},
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    point.band = it->second;
  }
  return out;
}

std::string snapshot_csv(const DynamicsSnapshot& snap) {
  std::string csv = "sample_id,mu,sigma\n";
  for (const auto& p : snap.points) {
    csv += csv_field(p.sample_id) + "," + format_fixed4(p.mu) + "," + format_fixed4(p.sigma) + "\n";
  }
  return csv;
}

Chart render_datamap(const DynamicsSnapshot& snap, double p) {
  const auto points = data_map_points(snap, p);
  Chart chart;
  chart.csv = "sample_id,mu,sigma,band\n";
  for (const auto& pt : points) {
    chart.csv += csv_field(pt.sample_id) + "," + format_fixed4(pt.y) + "," + format_fixed4(pt.x) + "," +
                 std::string(band_name(pt.band)) + "\n";
  }

  const Frame f{0.0, 0.5, 0.0, 1.0};
  std::ostringstream out;
  svg_open(out, "Data map at epoch " + std::to_string(snap.epoch) + " (pruning " + format_fixed4(p) + ")");
  svg_axes(out, f, "variability (sigma)", "confidence (DAD mu)", 5, 5);
  std::string a, b;
  out << "<g class=\"points\">\n";
  for (const auto& pt : points) {
    out << "<circle class=\"point " << band_name(pt.band) << "\" cx=\"" << f4(f.px(pt.x), a) << "\" cy=\""
        << f4(f.py(pt.y), b) << "\" r=\"3\" fill=\"" << band_color(pt.band) << "\" fill-opacity=\"0.75\"><title>"
        << xml_escape(pt.sample_id) << "</title></circle>\n";
  }
  out << "</g>\n<g class=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double y = kTop + 10.0;
  for (Band band : {Band::easy, Band::ambiguous, Band::hard}) {
    const auto count = std::count_if(points.begin(), points.end(), [&](const auto& pt) { return pt.band == band; });
    out << "<rect x=\"" << f4(kWidth - kRight + 16.0, a) << "\" y=\"" << f4(y - 8.0, b)
        << "\" width=\"10\" height=\"10\" fill=\"" << band_color(band) << "\"/>\n";
    out << "<text x=\"" << f4(kWidth - kRight + 32.0, a) << "\" y=\"" << f4(y, b) << "\">" << band_name(band)
        << " (" << count << ")</text>\n";
    y += 18.0;
  }
  out << "</g>\n</svg>\n";
  chart.svg = out.str();
  return chart;
}

Chart render_l_curve(const std::vector<LCurvePoint>& input) {
  if (input.empty()) throw Error(Errc::empty_input, "moving-distance curve has no points");
  std::vector<LCurvePoint> curve = input;
  for (auto& pt : curve) pt.distance = quantize4(pt.distance);

  Chart chart;
  chart.csv = "epoch,distance\n";
  for (const auto& pt : curve) chart.csv += std::to_string(pt.epoch) + "," + format_fixed4(pt.distance) + "\n";

  double l_max = curve.front().distance;
  double l_min = 0.0;
  for (const auto& pt : curve) {
    l_max = std::max(l_max, pt.distance);
    l_min = std::min(l_min, pt.distance);
  }
  const auto stop = find_stop_index(curve);
  int e0 = curve.front().epoch;
  int e1 = curve.back().epoch;
  if (e0 == e1) {
    --e0;
    ++e1;
  }
  const double top = l_max > l_min ? l_max : l_min + 1.0;
  const Frame f{static_cast<double>(e0), static_cast<double>(e1), l_min, top};

  std::ostringstream out;
  svg_open(out, "Moving distance");
  svg_axes(out, f, "epoch", "moving distance L", 5, 5);
  std::string a, b, c, d;
  out << "<polyline class=\"curve\" fill=\"none\" stroke=\"#3182bd\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << (i ? " " : "") << f4(f.px(curve[i].epoch), a) << ',' << f4(f.py(curve[i].distance), b);
  }
  out << "\"/>\n<g class=\"points\">\n";
  for (const auto& pt : curve) {
    out << "<circle class=\"point\" cx=\"" << f4(f.px(pt.epoch), a) << "\" cy=\"" << f4(f.py(pt.distance), b)
        << "\" r=\"2.5\" fill=\"#3182bd\"/>\n";
  }
  out << "</g>\n";
  const double threshold = kStopFraction * l_max;
  out << "<line class=\"threshold\" x1=\"" << f4(f.px(f.x0), a) << "\" y1=\"" << f4(f.py(threshold), b)
      << "\" x2=\"" << f4(f.px(f.x1), c) << "\" y2=\"" << f4(f.py(threshold), d)
      << "\" stroke=\"#969696\" stroke-dasharray=\"4 3\"/>\n";
  if (stop) {
    const double x = f.px(curve[*stop].epoch);
    out << "<line class=\"stop\" x1=\"" << f4(x, a) << "\" y1=\"" << f4(f.py(f.y0), b) << "\" x2=\"" << f4(x, c)
        << "\" y2=\"" << f4(f.py(f.y1), d) << "\" stroke=\"#d7301f\" stroke-width=\"1.5\"/>\n";
    out << "<text class=\"stop-label\" x=\"" << f4(x + 4.0, a) << "\" y=\"" << f4(kTop + 12.0, b)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#d7301f\">stop @ " << curve[*stop].epoch
        << "</text>\n";
  }
  out << "<text class=\"legend\" x=\"" << f4(kWidth - kRight + 16.0, a) << "\" y=\"" << f4(kTop + 10.0, b)
      << "\" font-family=\"sans-serif\" font-size=\"11\">1% of max = " << format_fixed4(threshold) << "</text>\n";
  out << "</svg>\n";
  chart.svg = out.str();
  return chart;
}

std::vector<LCurvePoint> parse_l_curve_csv(std::string_view csv) {
  std::vector<LCurvePoint> out;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    const auto nl = csv.find('\n');
    std::string_view line = csv.substr(0, nl);
    csv = nl == std::string_view::npos ? std::string_view{} : csv.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "epoch,distance") throw Error(Errc::malformed_record, "L-curve CSV header is not 'epoch,distance'");
      continue;
    }
    const auto comma = line.find(',');
    LCurvePoint pt;
    const std::string_view epoch = line.substr(0, comma);
    const auto r = std::from_chars(epoch.data(), epoch.data() + epoch.size(), pt.epoch);
    char* end = nullptr;
    const std::string value(comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1));
    pt.distance = std::strtod(value.c_str(), &end);
    if (comma == std::string_view::npos || r.ec != std::errc{} || r.ptr != epoch.data() + epoch.size() ||
        value.empty() || *end != '\0') {
      throw Error(Errc::malformed_record, "bad L-curve CSV row at line " + std::to_string(line_no));
    }
    out.push_back(pt);
  }
  return out;
}

std::string rank_listing(const Ranking& ranking, std::size_t k) {
  const std::size_t n = ranking.size();
  if (2 * k > n) {
    throw Error(Errc::out_of_range,
                "listing " + std::to_string(k) + " from each end needs at least " + std::to_string(2 * k) +
                    " ranked samples, have " + std::to_string(n));
  }
  const bool low_is_hard = higher_is_easier(ranking.metric);
  std::ostringstream out;
  out << "ranking metric=" << ranking.metric << " epoch=" << ranking.scoring_epoch << " n=" << n << "\n";
  auto section = [&](std::string_view title, std::size_t first) {
    out << "== " << title << " " << k << " (" << (((first == 0) == low_is_hard) ? "hard-to-learn" : "easy-to-learn")
        << ") ==\n";
    for (std::size_t i = first; i < first + k; ++i) {
      out << "  " << (i + 1) << "\t" << ranking.entries[i].sample_id << "\t" << format_fixed4(ranking.entries[i].score)
          << "\n";
    }
  };
  section("lowest", 0);
  section("highest", n - k);
  return out.str();
}

Chart render_overlap_bars(const std::vector<OverlapBar>& bars) {
  if (bars.empty()) throw Error(Errc::empty_input, "no overlap bars to render");
  Chart chart;
  chart.csv = "label,overlap\n";
  for (const auto& bar : bars) chart.csv += csv_field(bar.label) + "," + format_fixed4(bar.overlap) + "\n";

  const Frame f{0.0, static_cast<double>(bars.size()), 0.0, 1.0};
  std::ostringstream out;
  svg_open(out, "Subset overlap");
  svg_axes(out, f, "scoring epoch", "overlap", static_cast<int>(bars.size()), 5);
  std::string a, b, c, d;
  out << "<g class=\"bars\">\n";
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const double v = std::clamp(bars[i].overlap, 0.0, 1.0);
    const double x = f.px(i + 0.15);
    const double w = f.px(i + 0.85) - x;
    out << "<rect class=\"bar\" x=\"" << f4(x, a) << "\" y=\"" << f4(f.py(v), b) << "\" width=\"" << f4(w, c)
        << "\" height=\"" << f4(f.py(0.0) - f.py(v), d) << "\" fill=\"#3182bd\"><title>" << xml_escape(bars[i].label)
        << "</title></rect>\n";
    out << "<text x=\"" << f4(x + w / 2.0, a) << "\" y=\"" << f4(f.py(v) - 4.0, b)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" << xml_escape(bars[i].label)
        << "</text>\n";
  }
  out << "</g>\n</svg>\n";
  chart.svg = out.str();
  return chart;
}

}  // namespace dadprune
