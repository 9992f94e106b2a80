#include "hegp/metrics.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace hegp {

double rpd(double best, double method) {
  if (!(best > 0.0)) throw std::domain_error(fmt::format("rpd needs a positive best value, got {}", best));
  return (best - method) / best * 100.0;
}

double rg(double a, double b) {
  if (a == 0.0) throw std::domain_error("rg is undefined for a zero reference");
  return (a - b) / a * 100.0;
}

std::vector<double> average_rank(const std::vector<std::vector<double>>& values) {
  const std::size_t m = values.size();
  if (m == 0) return {};
  const std::size_t s = values.front().size();
  for (const auto& row : values) {
    if (row.size() != s) throw std::invalid_argument("average_rank needs a full methods x scenarios matrix");
  }
  std::vector<double> out(m, 0.0);
  if (s == 0) return out;
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t i = 0; i < m; ++i) {
      std::size_t better = 0;
      std::size_t equal = 0;
      for (std::size_t k = 0; k < m; ++k) {
        if (values[k][j] > values[i][j]) ++better;
        else if (values[k][j] == values[i][j]) ++equal;
      }
      // Tied methods occupy ranks better+1 .. better+equal.
      out[i] += static_cast<double>(better) + (static_cast<double>(equal) + 1.0) / 2.0;
    }
  }
  for (auto& r : out) r /= static_cast<double>(s);
  return out;
}

}  // namespace hegp
