#ifndef ECC_CONFIG_HPP_
#define ECC_CONFIG_HPP_

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ecc/error.hpp"
#include "ecc/io.hpp"
#include "ecc/pipeline.hpp"
#include "ecc/simulate.hpp"

namespace ecc {

namespace detail {

[[noreturn]] inline void config_error(const std::string &what) {
  throw error(error_kind::parse, "parse_config", what);
}

inline double config_real(std::string_view key, std::string_view text) {
  const auto v = parse_real(text);
  if (!v) {
    config_error(std::string(key) + ": '" + std::string(trim(text)) + "' is not a number");
  }
  return *v;
}

inline std::uint64_t config_unsigned(std::string_view key, std::string_view text) {
  text = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    config_error(std::string(key) + ": '" + std::string(text) +
                 "' is not a nonnegative integer");
  }
  return value;
}

} // namespace detail

/// "a:b:c" (inclusive arithmetic range) or "a,b,c".
inline std::vector<double> parse_real_list(std::string_view key, std::string_view text) {
  text = trim(text);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
      detail::config_error(std::string(key) + ": ranges are start:stop:step");
    }
    const double start = detail::config_real(key, parts[0]);
    const double stop = detail::config_real(key, parts[1]);
    const double step = detail::config_real(key, parts[2]);
    if (!(step > 0.0) || stop < start) {
      detail::config_error(std::string(key) + ": need step > 0 and stop >= start");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) {
      // round to 12 decimals so 0.1 steps print as written
      const double v = start + static_cast<double>(i) * step;
      out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
  }
  for (const auto part : split(text, ',')) {
    out.push_back(detail::config_real(key, part));
  }
  return out;
}

/// "base", "bernoulli:pA,pB", "phase:delta" or "shared".
inline DgpVariant parse_variant(std::string_view text) {
  text = trim(text);
  if (text == "base") {
    return BaseDgp{};
  }
  if (text == "shared") {
    return SharedScoreDgp{};
  }
  if (text.starts_with("bernoulli:")) {
    const auto parts = split(text.substr(10), ',');
    if (parts.size() != 2) {
      detail::config_error("variant: expected bernoulli:pA,pB");
    }
    return BernoulliDgp{detail::config_real("variant", parts[0]),
                        detail::config_real("variant", parts[1])};
  }
  if (text.starts_with("phase:")) {
    return PhaseShiftDgp{detail::config_real("variant", text.substr(6))};
  }
  detail::config_error("variant: unknown '" + std::string(text) + "'");
}

/// "mindist", "ks" or "fixed:K".
inline KSelection parse_k_selection(std::string_view text) {
  text = trim(text);
  if (text == "mindist") {
    return KSelection::mindist_default();
  }
  if (text == "ks") {
    return KSelection::ks_default();
  }
  if (text.starts_with("fixed:")) {
    return KSelection::fixed(detail::config_unsigned("kselect", text.substr(6)));
  }
  detail::config_error("kselect: expected mindist, ks or fixed:K, got '" + std::string(text) +
                       "'");
}

/*
 * Experiment configuration, one `key = value` per line, `#` starts a comment.
 *
 *   seed           required, unsigned 64-bit
 *   alpha          tail index (> 2), default 3
 *   n              sample sizes, e.g. 100,500,2000
 *   targets        rho_XY values: list or start:stop:step
 *   reps           replications per cell, default 1000
 *   kselect        mindist | ks | fixed:K, default mindist
 *   J              grid size, default 100
 *   noise_variance variance of the Gaussian components, default 0.25
 *   variant        base | phase:delta | bernoulli:pA,pB | shared, default base
 *   threads        worker threads, default 0 (hardware concurrency)
 */
inline ExperimentConfig parse_experiment_config(std::string_view text) {
  ExperimentConfig cfg;
  cfg.threads = 0;
  bool have_seed = false;
  std::map<std::string, bool> seen;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      detail::config_error("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (seen[key]) {
      detail::config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    seen[key] = true;
    if (key == "seed") {
      cfg.seed = detail::config_unsigned(key, value);
      have_seed = true;
    } else if (key == "alpha") {
      cfg.alpha = detail::config_real(key, value);
    } else if (key == "n") {
      cfg.sample_sizes.clear();
      for (const auto part : split(value, ',')) {
        cfg.sample_sizes.push_back(detail::config_unsigned(key, part));
      }
    } else if (key == "targets") {
      cfg.targets = parse_real_list(key, value);
    } else if (key == "reps") {
      cfg.reps = detail::config_unsigned(key, value);
    } else if (key == "kselect") {
      cfg.k_selection = parse_k_selection(value);
    } else if (key == "J") {
      cfg.grid_size = detail::config_unsigned(key, value);
    } else if (key == "noise_variance") {
      cfg.noise_variance = detail::config_real(key, value);
    } else if (key == "variant") {
      cfg.variant = parse_variant(value);
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(detail::config_unsigned(key, value));
    } else {
      detail::config_error("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!have_seed) {
    detail::config_error("seed is required");
  }
  if (cfg.sample_sizes.empty()) {
    detail::config_error("n is required");
  }
  const bool needs_targets = std::holds_alternative<BaseDgp>(cfg.variant) ||
                             std::holds_alternative<PhaseShiftDgp>(cfg.variant);
  if (needs_targets && cfg.targets.empty()) {
    detail::config_error("targets is required for this variant");
  }
  return cfg;
}

} // namespace ecc

#endif // ECC_CONFIG_HPP_
