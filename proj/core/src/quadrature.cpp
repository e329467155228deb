#include "sabc/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace sabc {
namespace {

constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes kKronrodNodes[1], [3], [5], [7].
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kInitialSegments = 128;
constexpr int kScanPoints = 2001;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& log_f, double shift,
                      double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto f = [&](double t) {
    const double lf = log_f(t);
    return lf == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(lf - shift);
  };

  double kronrod = kKronrodWeights[7] * f(center);
  double gauss = kGaussWeights[3] * f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

LogIntegral integrate_log(const std::function<double(double)>& log_f, double lo,
                          double hi, std::span<const double> breakpoints,
                          double rel_tol, int max_intervals) {
  LogIntegral out;
  if (!(hi > lo)) {
    out.log_value = -std::numeric_limits<double>::infinity();
    out.converged = true;
    return out;
  }

  std::vector<double> cuts;
  cuts.reserve(kInitialSegments + breakpoints.size() + 1);
  for (int i = 0; i <= kInitialSegments; ++i) {
    cuts.push_back(lo + (hi - lo) * i / kInitialSegments);
  }
  for (double bp : breakpoints) {
    if (bp > lo && bp < hi) cuts.push_back(bp);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    shift = std::max(shift, log_f(lo + (hi - lo) * i / (kScanPoints - 1)));
  }
  for (double c : cuts) shift = std::max(shift, log_f(c));
  if (!std::isfinite(shift)) {
    // Either identically zero on the scan or overflowing; fall back to 0.
    shift = shift > 0 ? std::numeric_limits<double>::max() : 0.0;
  }

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gauss_kronrod(log_f, shift, cuts[i], cuts[i + 1]);
    total += s.value;
    total_error += s.error;
    heap.push(s);
  }

  const double min_width = 1e-14 * (hi - lo);
  while (static_cast<int>(heap.size()) < max_intervals) {
    if (total_error <= rel_tol * std::fabs(total)) {
      out.converged = true;
      break;
    }
    Segment worst = heap.top();
    if (worst.b - worst.a < min_width) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(log_f, shift, worst.a, mid);
    Segment right = gauss_kronrod(log_f, shift, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to shed accumulated cancellation from the running updates.
  total = 0.0;
  total_error = 0.0;
  out.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total += heap.top().value;
    total_error += heap.top().error;
    heap.pop();
  }
  if (!out.converged) out.converged = total_error <= rel_tol * std::fabs(total);
  out.log_value = total > 0 ? std::log(total) + shift
                            : -std::numeric_limits<double>::infinity();
  out.relative_error = total > 0 ? total_error / total : 0.0;
  return out;
}

}  // namespace sabc
