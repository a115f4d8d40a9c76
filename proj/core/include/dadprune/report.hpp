#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dadprune/dynamics.hpp"
#include "dadprune/pruning.hpp"

namespace dadprune {

// Renderers are pure string assembly: same input, same bytes. Numbers are
// printed with four decimals.

struct Chart {
  std::string csv;
  std::string svg;
};

/// Writes `<prefix>.csv` and `<prefix>.svg`.
void write_chart(const std::filesystem::path& prefix, const Chart& chart);

/// Four-decimal fixed formatting; never prints "-0.0000".
std::string format_fixed4(double v);

enum class Band { hard, ambiguous, easy };
std::string_view band_name(Band b);

struct DataMapPoint {
  std::string sample_id;
  double x = 0.0;  // variability
  double y = 0.0;  // DAD
  Band band = Band::ambiguous;
};

/// Band of every snapshot point for pruning fraction `p`: the samples the
/// ambiguous strategy trims from the hard and easy ends, and the kept middle.
std::vector<DataMapPoint> data_map_points(const DynamicsSnapshot& snap, double p);

/// CSV `sample_id,mu,sigma,band` plus a scatter of sigma (x) against mu (y).
Chart render_datamap(const DynamicsSnapshot& snap, double p);

/// CSV `sample_id,mu,sigma` in id order.
std::string snapshot_csv(const DynamicsSnapshot& snap);

/// CSV `epoch,distance` plus a polyline with a rule at 1% of the maximum and,
/// if the stop rule fires, a vertical rule at the stop epoch. Values are
/// rounded to four decimals before anything is derived from them, so
/// re-rendering the parsed CSV reproduces the chart byte for byte.
Chart render_l_curve(const std::vector<LCurvePoint>& curve);
std::vector<LCurvePoint> parse_l_curve_csv(std::string_view csv);

/// The k lowest and k highest ranked samples, ascending within each section.
/// Requires 2k <= n.
std::string rank_listing(const Ranking& ranking, std::size_t k);

struct OverlapBar {
  std::string label;
  double overlap = 0.0;
};

/// Subset overlap per scoring epoch as CSV `label,overlap` and a bar chart.
Chart render_overlap_bars(const std::vector<OverlapBar>& bars);

}  // namespace dadprune
