#ifndef ECC_REPORT_JSON_HPP_
#define ECC_REPORT_JSON_HPP_

#include <cmath>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ecc/error.hpp"
#include "ecc/estimators.hpp"
#include "ecc/pipeline.hpp"
#include "ecc/simulate.hpp"
#include "ecc/tail.hpp"

namespace ecc {

inline constexpr int json_schema_version = 1;

namespace detail {

// JSON has no NaN; undefined values become null.
inline nlohmann::json real_or_null(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

} // namespace detail

inline nlohmann::json to_json(const TailFit &fit) {
  return {{"alpha_hat", detail::real_or_null(fit.alpha_hat)},
          {"k", fit.k},
          {"threshold", detail::real_or_null(fit.threshold)},
          {"method", std::string(to_string(fit.method))},
          {"distance", detail::real_or_null(fit.distance)}};
}

inline nlohmann::json to_json(const HillSeries &series) {
  auto arr = nlohmann::json::array();
  for (const auto &e : series.entries) {
    arr.push_back({{"k", e.k},
                   {"alpha", detail::real_or_null(e.alpha_hat)},
                   {"lo", detail::real_or_null(e.ci_low)},
                   {"hi", detail::real_or_null(e.ci_high)}});
  }
  return arr;
}

inline nlohmann::json to_json(const EccReport &r) {
  return {{"sigma_xy", detail::real_or_null(r.sigma_xy)},
          {"rho_xy", detail::real_or_null(r.rho_xy)},
          {"gamma_xy", detail::real_or_null(r.gamma_xy)},
          {"k", r.k},
          {"r_k", detail::real_or_null(r.r_k)},
          {"exceedance_indices", r.exceedance_indices}};
}

inline nlohmann::json to_json(const PipelineReport &r) {
  return {{"schema_version", json_schema_version},
          {"n", r.n},
          {"grid_size", r.grid_size},
          {"centered", r.centered},
          {"tail_x", to_json(r.tail_x)},
          {"tail_y", to_json(r.tail_y)},
          {"transform",
           {{"applied", r.transform.applied},
            {"alpha_source_x", r.transform.alpha_source_x},
            {"alpha_source_y", r.transform.alpha_source_y},
            {"alpha_target", r.transform.alpha_target}}},
          {"radius_fit", to_json(r.radius_fit)},
          {"estimate", to_json(r.ecc)},
          {"hill_x", to_json(r.hill_x)},
          {"hill_y", to_json(r.hill_y)}};
}

inline nlohmann::json to_json(const PairwiseMatrix &m, const std::vector<std::string> &labels,
                              const PipelineOptions &options) {
  auto k = nlohmann::json::array();
  for (std::size_t a = 0; a < m.m; ++a) {
    std::vector<std::size_t> row(m.k.begin() + static_cast<std::ptrdiff_t>(a * m.m),
                                 m.k.begin() + static_cast<std::ptrdiff_t>((a + 1) * m.m));
    k.push_back(row);
  }
  auto rho = nlohmann::json::array();
  for (std::size_t a = 0; a < m.m; ++a) {
    std::vector<double> row(m.rho.begin() + static_cast<std::ptrdiff_t>(a * m.m),
                            m.rho.begin() + static_cast<std::ptrdiff_t>((a + 1) * m.m));
    rho.push_back(row);
  }
  return {{"schema_version", json_schema_version},
          {"labels", labels},
          {"rho", rho},
          {"k", k},
          {"options",
           {{"kselect", std::string(to_string(options.k_selection.method))},
            {"fixed_k", options.k_selection.fixed_k},
            {"alpha_target", options.alpha_target},
            {"tau", options.tau},
            {"center", options.center}}}};
}

inline nlohmann::json to_json(const ExperimentTable &table) {
  auto rows = nlohmann::json::array();
  for (const auto &r : table.rows) {
    rows.push_back({{"rho_xy", r.target},
                    {"alpha", r.alpha},
                    {"n", r.n},
                    {"rho", r.rho},
                    {"mean", detail::real_or_null(r.mean)},
                    {"abs_bias", detail::real_or_null(r.abs_bias)},
                    {"standard_error", detail::real_or_null(r.standard_error)},
                    {"replications", r.replications},
                    {"failed", r.failed},
                    {"mean_k", detail::real_or_null(r.mean_k)}});
  }
  return {{"schema_version", json_schema_version}, {"rows", rows}};
}

inline nlohmann::json error_json(const error &e) {
  return {{"schema_version", json_schema_version},
          {"error",
           {{"code", std::string(to_string(e.kind()))},
            {"operation", e.operation()},
            {"message", e.what()}}}};
}

} // namespace ecc

#endif // ECC_REPORT_JSON_HPP_
