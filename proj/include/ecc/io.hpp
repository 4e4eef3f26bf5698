#ifndef ECC_IO_HPP_
#define ECC_IO_HPP_

#include <charconv>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ecc/chi.hpp"
#include "ecc/curves.hpp"
#include "ecc/error.hpp"
#include "ecc/pipeline.hpp"
#include "ecc/simulate.hpp"
#include "ecc/tail.hpp"

namespace ecc {

// ---------------------------------------------------------------------------
// Numbers
// ---------------------------------------------------------------------------

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

/// Parses a finite decimal number; nullopt for anything else (including nan/inf).
inline std::optional<double> parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) {
    return std::nullopt;
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

/// Shortest representation that reads back to the same double.
inline std::string format_real(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// ---------------------------------------------------------------------------
// Curve files: one curve per row, one grid point per column, comma-delimited,
// optional single header row.
// ---------------------------------------------------------------------------

inline FunctionalSample parse_curve_text(std::string_view text,
                                         const std::string &source = "<input>") {
  constexpr const char *op = "parse_curve_file";
  std::vector<Curve> curves;
  std::size_t columns = 0;
  bool seen_first = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    const std::string_view line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) {
      if (end == text.size()) {
        break;
      }
      continue;
    }
    const auto cells = split(line, ',');
    std::vector<double> values;
    values.reserve(cells.size());
    std::optional<std::size_t> bad_column;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_real(cells[c]);
      if (!v) {
        bad_column = c;
        break;
      }
      values.push_back(*v);
    }
    if (!seen_first) {
      seen_first = true;
      if (bad_column) {
        // header row
        columns = cells.size();
        continue;
      }
    }
    if (bad_column) {
      throw error(error_kind::parse, op,
                  source + ": row " + std::to_string(line_no) + ", column " +
                      std::to_string(*bad_column + 1) + ": '" +
                      std::string(trim(cells[*bad_column])) + "' is not a finite number");
    }
    if (columns == 0) {
      columns = values.size();
    }
    if (values.size() != columns) {
      throw error(error_kind::parse, op,
                  source + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(values.size()) + " columns, expected " +
                      std::to_string(columns));
    }
    curves.emplace_back(std::move(values));
    if (end == text.size()) {
      break;
    }
  }
  if (curves.empty()) {
    throw error(error_kind::empty_input, op, source + ": no data rows");
  }
  return FunctionalSample(std::move(curves));
}

inline std::string read_text_file(const std::string &path, const char *operation) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw error(error_kind::parse, operation, path + ": cannot open file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline FunctionalSample parse_curve_file(const std::string &path) {
  return parse_curve_text(read_text_file(path, "parse_curve_file"), path);
}

inline std::string format_curves(const FunctionalSample &sample) {
  std::string out;
  for (const Curve &c : sample) {
    const auto v = c.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j != 0) {
        out += ',';
      }
      out += format_real(v[j]);
    }
    out += '\n';
  }
  return out;
}

inline void write_text_file(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw error(error_kind::parse, "write_file", path + ": cannot open for writing");
  }
  out << text;
}

inline void write_curve_file(const std::string &path, const FunctionalSample &sample) {
  write_text_file(path, format_curves(sample));
}

/*
 * Linear interpolation from knots j/J to points i/J_target. Below the first
 * knot 1/J the first value is held.
 */
inline Curve resample_linear(const Curve &c, std::size_t target_grid) {
  const std::size_t grid = c.grid_size();
  if (grid < 2 || target_grid < 2) {
    throw error(error_kind::range, "resample_linear", "need J >= 2 and J_target >= 2");
  }
  std::vector<double> out(target_grid);
  for (std::size_t i = 1; i <= target_grid; ++i) {
    // position in knot units: t J = i J / J_target, kept exact in integers
    const std::size_t scaled = i * grid;
    const std::size_t idx = scaled / target_grid;
    const std::size_t rem = scaled % target_grid;
    if (idx < 1) {
      out[i - 1] = c[0];
    } else if (idx >= grid) {
      out[i - 1] = c[grid - 1];
    } else {
      const double frac = static_cast<double>(rem) / static_cast<double>(target_grid);
      const double lo = c[idx - 1];
      const double hi = c[idx];
      out[i - 1] = rem == 0 ? lo : lo + frac * (hi - lo);
    }
  }
  return Curve(std::move(out));
}

inline FunctionalSample resample_linear(const FunctionalSample &s, std::size_t target_grid) {
  std::vector<Curve> out;
  out.reserve(s.size());
  for (const Curve &c : s) {
    out.push_back(resample_linear(c, target_grid));
  }
  return FunctionalSample(std::move(out));
}

// ---------------------------------------------------------------------------
// Plot-ready CSV series
// ---------------------------------------------------------------------------

inline std::string format_hill_csv(const HillSeries &series) {
  std::string out = "k,alpha,lo,hi\n";
  for (const auto &e : series.entries) {
    out += std::to_string(e.k) + ',' + format_real(e.alpha_hat) + ',' + format_real(e.ci_low) +
           ',' + format_real(e.ci_high) + '\n';
  }
  return out;
}

inline std::string format_chi_csv(const ChiSeries &series) {
  std::string out = "q,chi,chibar,chi_lo,chi_hi,chibar_lo,chibar_hi,raw_chibar\n";
  for (const auto &e : series.entries) {
    out += format_real(e.q) + ',' + format_real(e.chi) + ',' + format_real(e.chibar) + ',' +
           format_real(e.chi_lo) + ',' + format_real(e.chi_hi) + ',' + format_real(e.chibar_lo) +
           ',' + format_real(e.chibar_hi) + ',' + format_real(e.raw_chibar) + '\n';
  }
  return out;
}

inline std::string format_pairwise_csv(const PairwiseMatrix &matrix,
                                       const std::vector<std::string> &labels) {
  std::string out = "label";
  for (const auto &l : labels) {
    out += ',' + l;
  }
  out += '\n';
  for (std::size_t a = 0; a < matrix.m; ++a) {
    out += labels[a];
    for (std::size_t b = 0; b < matrix.m; ++b) {
      out += ',' + format_real(matrix.at(a, b));
    }
    out += '\n';
  }
  return out;
}

/// Wide layout: one row per rho_XY target, bias / SE / mean k columns per n.
inline std::string format_experiment_csv(const ExperimentTable &table) {
  std::vector<double> targets;
  std::vector<std::size_t> sizes;
  for (const auto &r : table.rows) {
    if (std::find(targets.begin(), targets.end(), r.target) == targets.end()) {
      targets.push_back(r.target);
    }
    if (std::find(sizes.begin(), sizes.end(), r.n) == sizes.end()) {
      sizes.push_back(r.n);
    }
  }
  std::string out = "rho_xy";
  for (const auto n : sizes) {
    const auto s = std::to_string(n);
    out += ",bias_n" + s + ",se_n" + s + ",mean_k_n" + s;
  }
  out += '\n';
  for (const double t : targets) {
    out += format_real(t);
    for (const auto n : sizes) {
      const auto it = std::find_if(table.rows.begin(), table.rows.end(),
                                   [&](const ExperimentRow &r) { return r.target == t && r.n == n; });
      out += ',' + format_real(it->abs_bias) + ',' + format_real(it->standard_error) + ',' +
             format_real(it->mean_k);
    }
    out += '\n';
  }
  return out;
}

} // namespace ecc

#endif // ECC_IO_HPP_
