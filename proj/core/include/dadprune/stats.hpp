#pragma once

#include <span>
#include <vector>

namespace dadprune {

/// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation (Pearson correlation of average ranks). Throws
/// when the inputs differ in length, have fewer than two entries, or either
/// side is constant.
double spearman(std::span<const double> a, std::span<const double> b);

}  // namespace dadprune
