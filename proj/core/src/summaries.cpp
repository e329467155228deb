#include "sabc/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "sabc/error.hpp"

namespace sabc {
namespace {

Dataset sorted_copy(const Dataset& data) {
  Dataset s = data;
  std::sort(s.begin(), s.end());
  return s;
}

double central_moment(const Dataset& data, double mean, int order) {
  double acc = 0.0;
  for (double x : data) acc += std::pow(x - mean, order);
  return acc / static_cast<double>(data.size());
}

}  // namespace

SummaryVector s10(const Dataset& data) {
  if (data.size() != 100) {
    throw DimensionError("s10 needs exactly 100 observations, got " +
                         std::to_string(data.size()));
  }
  const Dataset s = sorted_copy(data);
  SummaryVector out;
  out.reserve(10);
  for (std::size_t rank = 5; rank <= 95; rank += 10) out.push_back(s[rank - 1]);
  return out;
}

SummaryVector literature_summary(LiteratureExample example, const Dataset& data) {
  if (data.size() < 10) throw DimensionError("literature summaries need n >= 10");
  const std::size_t n = data.size();
  if (example == LiteratureExample::kB) {
    double mean = 0.0;
    for (double x : data) mean += x;
    mean /= static_cast<double>(n);
    return {central_moment(data, mean, 4), central_moment(data, mean, 6)};
  }
  const Dataset s = sorted_copy(data);
  const auto rank = [n](double q) {
    return static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  };
  return {s[rank(0.1) - 1], s[rank(0.9) - 1]};
}

std::vector<double> basis_expand(const Dataset& data, std::size_t n) {
  if (data.size() != n) {
    throw DimensionError("basis expects " + std::to_string(n) + " observations, got " +
                         std::to_string(data.size()));
  }
  std::vector<double> out;
  out.reserve(n + 1);
  out.push_back(1.0);
  const Dataset s = sorted_copy(data);
  out.insert(out.end(), s.begin(), s.end());
  return out;
}

SummaryVector eval_fitted(const FittedSummary& summary, const Dataset& data) {
  if (static_cast<std::size_t>(summary.coefficients.rows()) != summary.pairs.size() ||
      static_cast<std::size_t>(summary.coefficients.cols()) != summary.basis_dim()) {
    throw DimensionError("fitted summary coefficient matrix does not match its pairs/basis");
  }
  const std::vector<double> f = basis_expand(data, summary.basis_n);
  const Eigen::Map<const Eigen::VectorXd> fv(f.data(), static_cast<Eigen::Index>(f.size()));
  const Eigen::VectorXd eta = summary.coefficients * fv;
  SummaryVector out(summary.pairs.size());
  for (std::size_t r = 0; r < out.size(); ++r) {
    out[r] = std::clamp(eta[static_cast<Eigen::Index>(r)], -kLogitClamp, kLogitClamp);
  }
  return out;
}

std::string fitted_summary_to_json(const FittedSummary& summary) {
  nlohmann::json j;
  j["pairs"] = nlohmann::json::array();
  for (const auto& [a, b] : summary.pairs) j["pairs"].push_back({a, b});
  j["coefficients"] = nlohmann::json::array();
  for (Eigen::Index r = 0; r < summary.coefficients.rows(); ++r) {
    std::vector<double> row(summary.coefficients.cols());
    for (Eigen::Index c = 0; c < summary.coefficients.cols(); ++c) {
      row[c] = summary.coefficients(r, c);
    }
    j["coefficients"].push_back(row);
  }
  j["basis"] = summary.basis_name();
  return j.dump();
}

FittedSummary fitted_summary_from_json(const std::string& text) {
  FittedSummary out;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw DimensionError(std::string("invalid fitted summary JSON: ") + e.what());
  }
  const std::string basis = j.at("basis").get<std::string>();
  constexpr std::string_view prefix = "order_stats_";
  if (basis.rfind(prefix, 0) != 0) throw DimensionError("unknown basis: " + basis);
  const std::size_t dim = std::stoul(basis.substr(prefix.size()));
  if (dim < 2) throw DimensionError("basis dimension too small: " + basis);
  out.basis_n = dim - 1;

  for (const auto& p : j.at("pairs")) {
    out.pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
  }
  const auto& rows = j.at("coefficients");
  if (rows.size() != out.pairs.size()) {
    throw DimensionError("coefficient rows do not match pair count");
  }
  out.coefficients.resize(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) throw DimensionError("coefficient row has wrong length");
    for (std::size_t c = 0; c < dim; ++c) {
      out.coefficients(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          rows[r][c].get<double>();
    }
  }
  return out;
}

std::size_t SummaryDef::output_dim() const {
  switch (kind_) {
    case Kind::kOrderStats10: return 10;
    case Kind::kLiteratureB:
    case Kind::kLiteratureC: return 2;
    case Kind::kFullOrderBasis: return basis_n_ + 1;
    case Kind::kFitted: return fit_.output_dim();
  }
  return 0;
}

SummaryVector SummaryDef::evaluate(const Dataset& data) const {
  switch (kind_) {
    case Kind::kOrderStats10: return s10(data);
    case Kind::kLiteratureB: return literature_summary(LiteratureExample::kB, data);
    case Kind::kLiteratureC: return literature_summary(LiteratureExample::kC, data);
    case Kind::kFullOrderBasis: return basis_expand(data, basis_n_);
    case Kind::kFitted: return eval_fitted(fit_, data);
  }
  return {};
}

}  // namespace sabc
