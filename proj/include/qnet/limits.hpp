#pragma once

#include <cstdint>
#include <string_view>

namespace qnet {

/// Enumeration caps for the exponential exact modes and oracles.
struct Limits {
  std::size_t partition_nodes = 12;       // Bell(12) partitions
  std::size_t subset_nodes = 20;          // 2^N subsets for bottleneck checks
  std::size_t lp_nodes = 16;              // 2^N - 2 LP constraints
  std::size_t max_trees = 1'000'000;      // spanning-tree enumeration
  std::int64_t oracle_rounds = 8;         // brute-force packing round cap
  std::size_t oracle_states = 4'000'000;  // memoized residual states
  std::size_t audit_bits = 20;            // exhaustive secrecy audit
  std::size_t backtrack_nodes = 10'000;   // basic-algorithm search budget
  std::size_t max_pivots = 1'000'000;     // simplex guard

  /// Parses "key=value,key=value" overrides (keys match the field names).
  /// Throws Error(MalformedInput) on unknown keys or bad values.
  static Limits parse(std::string_view spec, Limits base);
  static Limits parse(std::string_view spec);

  /// Defaults overridden by the QNET_STP_CAPS environment variable, if set.
  static Limits from_environment();
};

}  // namespace qnet
