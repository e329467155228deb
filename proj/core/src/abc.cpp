#include "sabc/abc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sabc/csv.hpp"
#include "sabc/error.hpp"

namespace sabc {

void SimBank::apply_summary(const SummaryDef& summary) {
  for (auto& r : records) r.summary = summary.evaluate(r.data);
}

SdEstimate estimate_sds(const SimBank& bank) {
  if (bank.records.empty()) throw std::invalid_argument("cannot estimate scales of an empty bank");
  const std::size_t dim = bank.records.front().summary.size();
  const double n = static_cast<double>(bank.size());

  std::vector<double> mean(dim, 0.0);
  for (const auto& r : bank.records) {
    if (r.summary.size() != dim) throw DimensionError("bank summaries have unequal lengths");
    for (std::size_t c = 0; c < dim; ++c) mean[c] += r.summary[c];
  }
  for (auto& m : mean) m /= n;
  std::vector<double> ss(dim, 0.0);
  for (const auto& r : bank.records) {
    for (std::size_t c = 0; c < dim; ++c) {
      const double d = r.summary[c] - mean[c];
      ss[c] += d * d;
    }
  }

  SdEstimate est;
  for (std::size_t c = 0; c < dim; ++c) {
    const double sd = bank.size() > 1 ? std::sqrt(ss[c] / (n - 1.0)) : 0.0;
    if (sd >= kMinSd && std::isfinite(sd)) {
      est.kept.push_back(c);
      est.sd.push_back(sd);
    } else {
      est.dropped.push_back(c);
    }
  }
  if (est.kept.empty()) throw std::invalid_argument("every summary component is degenerate");
  return est;
}

double scaled_distance(std::span<const double> a, std::span<const double> b,
                       std::span<const double> sd) {
  if (a.size() != b.size() || a.size() != sd.size()) {
    throw DimensionError("scaled_distance: length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double z = (a[i] - b[i]) / sd[i];
    acc += z * z;
  }
  return std::sqrt(acc);
}

AbcResult rejection_abc(const SimBank& bank, const SummaryVector& obs_summary,
                        std::size_t n_accept) {
  if (bank.records.empty()) throw std::invalid_argument("rejection ABC on an empty bank");
  return rejection_abc(bank, obs_summary, n_accept, estimate_sds(bank));
}

AbcResult rejection_abc(const SimBank& bank, const SummaryVector& obs_summary,
                        std::size_t n_accept, const SdEstimate& scaling) {
  if (bank.records.empty()) throw std::invalid_argument("rejection ABC on an empty bank");
  if (n_accept == 0 || n_accept > bank.size()) {
    throw std::invalid_argument("n_accept must be in [1, bank size]");
  }

  const std::size_t k = scaling.kept.size();
  std::vector<double> obs(k);
  for (std::size_t c = 0; c < k; ++c) obs.at(c) = obs_summary.at(scaling.kept[c]);

  AbcResult result;
  result.scheme = bank.scheme;
  result.scaling = scaling;
  result.distances.resize(bank.size());
  std::vector<double> sim(k);
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const auto& s = bank.records[i].summary;
    for (std::size_t c = 0; c < k; ++c) sim[c] = s.at(scaling.kept[c]);
    result.distances[i] = scaled_distance(obs, sim, scaling.sd);
  }

  std::vector<std::size_t> order(bank.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto closer = [&](std::size_t a, std::size_t b) {
    const double da = result.distances[a];
    const double db = result.distances[b];
    if (da != db) return da < db;
    return bank.records[a].sim_index < bank.records[b].sim_index;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_accept),
                    order.end(), closer);
  order.resize(n_accept);

  result.accepted = std::move(order);
  result.h = result.distances[result.accepted.back()];
  result.counts.assign(static_cast<std::size_t>(bank.n_models), 0);
  for (std::size_t idx : result.accepted) {
    ++result.counts.at(static_cast<std::size_t>(bank.records[idx].model));
  }
  return result;
}

std::vector<double> posterior_estimates(const AbcResult& result, std::span<const double> prior) {
  if (prior.size() != result.counts.size()) {
    throw DimensionError("prior length does not match the number of models");
  }
  // Prior masses are taken relative to the largest so that equal masses
  // leave the integer counts untouched.
  const double top = prior.empty() ? 1.0 : *std::max_element(prior.begin(), prior.end());
  std::vector<double> w(result.counts.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = static_cast<double>(result.counts[i]);
    if (result.scheme == SamplingScheme::kUniformModels && top > 0) w[i] *= prior[i] / top;
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("no acceptances with positive prior weight");
  for (auto& x : w) x /= total;
  return w;
}

std::optional<double> bayes_factor(const AbcResult& result, int i, int j) {
  if (result.scheme != SamplingScheme::kUniformModels) {
    throw std::invalid_argument("count ratios estimate Bayes factors only under uniform model sampling");
  }
  const int nj = result.counts.at(static_cast<std::size_t>(j));
  if (nj == 0) return std::nullopt;
  return static_cast<double>(result.counts.at(static_cast<std::size_t>(i))) / nj;
}

void write_abc_csv(std::ostream& out, const SimBank& bank, const AbcResult& result) {
  std::size_t dim = 0;
  for (const auto& r : bank.records) dim = std::max(dim, r.theta.size());
  std::vector<bool> accepted(bank.size(), false);
  for (std::size_t idx : result.accepted) accepted[idx] = true;

  out << "sim_index,model";
  for (std::size_t d = 1; d <= dim; ++d) out << ",theta_" << d;
  out << ",distance,accepted\n";
  for (std::size_t i = 0; i < bank.size(); ++i) {
    const auto& r = bank.records[i];
    out << r.sim_index << ',' << r.model;
    for (std::size_t d = 0; d < dim; ++d) {
      out << ',';
      if (d < r.theta.size()) out << format_real(r.theta[d]);
    }
    out << ',' << format_real(result.distances.at(i)) << ',' << (accepted[i] ? 1 : 0) << '\n';
  }
}

std::vector<double> uniform_prior(int n_models) {
  return std::vector<double>(static_cast<std::size_t>(n_models), 1.0 / n_models);
}

}  // namespace sabc
