#pragma once

#include <stdexcept>
#include <string>

namespace semitoric {

enum class Errc {
  invalid_input,
  parse_error,
  not_convex,
  empty_interior,
  out_of_domain,
  unbounded_slice,
  unbounded_area,
  not_a_vertex,
  too_many_cuts,
  uncanonicalizable,
  weight_extraction_failed,
  unbounded_truncation,
  invalid_point,
  not_critical,
  empty_level_set,
  out_of_range,
  fit_failure,
  validation_failure,
  usage_error,
  internal,
};

const char* errc_name(Errc c);

/// Library-wide exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace semitoric
