#ifndef ECC_ERROR_HPP_
#define ECC_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ecc {

enum class error_kind {
  grid_mismatch,
  shape,
  range,
  domain,
  degenerate_tail,
  degenerate_sample,
  parse,
  empty_input,
};

constexpr std::string_view to_string(error_kind kind) noexcept {
  switch (kind) {
  case error_kind::grid_mismatch:
    return "grid_mismatch";
  case error_kind::shape:
    return "shape";
  case error_kind::range:
    return "range";
  case error_kind::domain:
    return "domain";
  case error_kind::degenerate_tail:
    return "degenerate_tail";
  case error_kind::degenerate_sample:
    return "degenerate_sample";
  case error_kind::parse:
    return "parse";
  case error_kind::empty_input:
    return "empty_input";
  }
  return "unknown";
}

/// Every failure raised by the library. `operation` names the public
/// function that rejected its input so front ends can report it.
class error : public std::runtime_error {
public:
  error(error_kind kind, std::string operation, const std::string &message)
      : std::runtime_error(message), kind_(kind),
        operation_(std::move(operation)) {}

  error_kind kind() const noexcept { return kind_; }
  const std::string &operation() const noexcept { return operation_; }

private:
  error_kind kind_;
  std::string operation_;
};

} // namespace ecc

#endif // ECC_ERROR_HPP_
