#include "qnet/limits.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#include "qnet/error.hpp"

namespace qnet {
namespace {

// Subset masks are 64-bit, so the subset-based modes cannot go past this.
constexpr std::size_t kMaxMaskNodes = 30;

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw Error(ErrorCode::MalformedInput,
                "bad value for cap '" + std::string(key) + "': " + std::string(text));
  }
  return value;
}

}  // namespace

Limits Limits::parse(std::string_view spec, Limits base) {
  Limits out = base;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::MalformedInput, "cap override needs key=value: " + std::string(item));
    }
    std::string_view key = item.substr(0, eq);
    std::string_view value = item.substr(eq + 1);
    if (key == "partition_nodes") {
      out.partition_nodes = parse_number<std::size_t>(key, value);
    } else if (key == "subset_nodes") {
      out.subset_nodes = parse_number<std::size_t>(key, value);
    } else if (key == "lp_nodes") {
      out.lp_nodes = parse_number<std::size_t>(key, value);
    } else if (key == "max_trees") {
      out.max_trees = parse_number<std::size_t>(key, value);
    } else if (key == "oracle_rounds") {
      out.oracle_rounds = parse_number<std::int64_t>(key, value);
    } else if (key == "oracle_states") {
      out.oracle_states = parse_number<std::size_t>(key, value);
    } else if (key == "audit_bits") {
      out.audit_bits = parse_number<std::size_t>(key, value);
    } else if (key == "backtrack_nodes") {
      out.backtrack_nodes = parse_number<std::size_t>(key, value);
    } else if (key == "max_pivots") {
      out.max_pivots = parse_number<std::size_t>(key, value);
    } else {
      throw Error(ErrorCode::MalformedInput, "unknown cap: " + std::string(key));
    }
  }
  if (out.subset_nodes > kMaxMaskNodes || out.lp_nodes > kMaxMaskNodes ||
      out.audit_bits > kMaxMaskNodes) {
    throw Error(ErrorCode::MalformedInput, "subset-based caps cannot exceed 30 nodes/bits");
  }
  return out;
}

Limits Limits::parse(std::string_view spec) { return parse(spec, Limits{}); }

Limits Limits::from_environment() {
  const char* env = std::getenv("QNET_STP_CAPS");
  if (env == nullptr) return {};
  return parse(env);
}

}  // namespace qnet
