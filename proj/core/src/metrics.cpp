#include "sabc/metrics.hpp"

#include <cmath>
#include <limits>

#include "sabc/csv.hpp"
#include "sabc/error.hpp"

namespace sabc {

double entropic_loss(const std::vector<std::vector<double>>& estimates, std::span<const int> truth) {
  if (estimates.size() != truth.size()) throw DimensionError("estimates and truth differ in length");
  double loss = 0.0;
  for (std::size_t d = 0; d < estimates.size(); ++d) {
    const double p = estimates[d].at(static_cast<std::size_t>(truth[d]));
    if (!(p > 0)) return std::numeric_limits<double>::infinity();
    loss -= std::log(p);
  }
  return loss;
}

Misallocation misallocation(const std::vector<std::vector<double>>& estimates,
                            std::span<const int> truth) {
  if (estimates.size() != truth.size()) throw DimensionError("estimates and truth differ in length");
  Misallocation out;
  if (estimates.empty()) return out;
  std::size_t wrong = 0;
  for (std::size_t d = 0; d < estimates.size(); ++d) {
    const auto& p = estimates[d];
    std::size_t best = 0;
    std::size_t n_best = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
      if (p[m] > p[best]) {
        best = m;
        n_best = 1;
      } else if (p[m] == p[best]) {
        ++n_best;
      }
    }
    if (n_best > 1) {
      ++out.ties;
      ++wrong;
    } else if (best != static_cast<std::size_t>(truth[d])) {
      ++wrong;
    }
  }
  out.rate = static_cast<double>(wrong) / static_cast<double>(estimates.size());
  return out;
}

double misallocation_rate(const std::vector<std::vector<double>>& estimates,
                          std::span<const int> truth) {
  return misallocation(estimates, truth).rate;
}

std::string format_metric_cell(double loss, double rate) {
  const std::string l = std::isinf(loss) ? "inf" : format_fixed(loss, 1);
  return l + " (" + format_fixed(100.0 * rate, 0) + "%)";
}

}  // namespace sabc
