#pragma once

#include <optional>
#include <vector>

namespace roadcmp {

// 0 when either component is 0 (or negative).
double harmonic_mean(double a, double b);

// Pearson correlation; nullopt when either series has zero variance.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

// Spearman rank correlation with average ranks on ties.
std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y);

std::vector<double> average_ranks(const std::vector<double>& v);

}  // namespace roadcmp
