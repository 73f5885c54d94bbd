#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cli/table.hpp"
#include "cyclewalk/coin.hpp"
#include "cyclewalk/walk.hpp"

namespace cyclewalk::cli {

/// Bad flags or flag combinations. Maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ResolvedState {
  std::string label;
  Coin4 coin;
  /// Set when a custom vector had to be renormalized.
  std::optional<std::string> warning;
};

/// "A..B", inclusive on both ends.
std::vector<int> parse_d_range(std::string_view text);

/// "start:step:end", inclusive of end up to rounding.
std::vector<double> parse_phi_grid(std::string_view text);

/// One complex literal: "1", "-0.5", "2i", "-i", "0.5+0.5i", "1e-3-2.5e-1i".
Complex parse_complex(std::string_view text);

/// "psi_a".."psi_d" or "custom:z0,z1,z2,z3". Custom vectors are normalized,
/// with a warning if their norm was off by more than 1e-6.
ResolvedState parse_state(std::string_view text);

Format parse_format(std::string_view text);
Model parse_model(std::string_view text);

/// Parallelism: explicit flag, else CYCLEWALK_JOBS, else hardware threads.
int resolve_jobs(std::optional<int> flag);

/// Effective settings for one command after flags and config file merge.
struct RunConfig {
  std::string command;
  std::optional<int> d;
  std::optional<std::string> d_range;
  std::optional<double> phi;
  std::optional<std::string> phi_grid;
  std::vector<std::string> states;
  std::optional<std::int64_t> t;
  std::optional<std::int64_t> t_max;
  double epsilon = 1e-6;
  std::string model = "recycled";
  std::string format = "csv";
  std::string out;
  std::optional<int> jobs;
  bool distributions = false;
};

}  // namespace cyclewalk::cli
