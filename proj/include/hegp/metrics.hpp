#pragma once

#include <vector>

namespace hegp {

/// Relative percentage deviation of `method` from `best`, in percent.
/// Throws std::domain_error if best <= 0.
double rpd(double best, double method);

/// Relative gap (a - b) / a in percent. Throws std::domain_error if a == 0.
double rg(double a, double b);

/// values[m][s]: score of method m on scenario s, higher is better. Rank 1 is
/// best; tied methods share the mean of their ranks. Returns the per-method
/// rank averaged over scenarios.
std::vector<double> average_rank(const std::vector<std::vector<double>>& values);

}  // namespace hegp
