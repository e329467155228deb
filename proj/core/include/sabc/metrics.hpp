#pragma once

#include <span>
#include <string>
#include <vector>

namespace sabc {

/// -sum_d log estimates[d][truth[d]]; +inf if any of those probabilities is 0.
double entropic_loss(const std::vector<std::vector<double>>& estimates, std::span<const int> truth);

struct Misallocation {
  double rate = 0.0;
  /// Datasets whose maximum probability is shared by several models. These
  /// are counted as misallocated.
  std::size_t ties = 0;
};

Misallocation misallocation(const std::vector<std::vector<double>>& estimates,
                            std::span<const int> truth);

double misallocation_rate(const std::vector<std::vector<double>>& estimates,
                          std::span<const int> truth);

/// "19.8 (15%)", or "inf (21%)" for an infinite loss.
std::string format_metric_cell(double loss, double rate);

}  // namespace sabc
