#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace coevo {

enum class errc {
  too_short,
  non_finite,
  empty_input,
  out_of_range,
  insufficient_events,
  too_few_points,
  empty_cluster,
  rank_deficient,
  no_positive_p,
  mismatched_universe,
  invalid_mix,
  invalid_argument,
  parse_error,
  duplicate_row,
  io_error,
  source_unavailable,
  missing_analysis,
};

std::string_view to_string(errc code);

// Single exception type for the library; callers branch on code().
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace coevo
