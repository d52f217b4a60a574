#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/limits.hpp"
#include "qnet/rational.hpp"
#include "qnet/tree_packing.hpp"

namespace qnet {

inline constexpr const char* kKeyGenerator = "mt19937_64";

/// Pairwise key bits K_e, one vector per edge in edges() order.
struct KeyMaterial {
  std::int64_t rounds = 0;
  std::uint64_t seed = 0;
  std::string algorithm = kKeyGenerator;
  std::vector<std::int64_t> per_round;  // L_e
  std::vector<std::vector<std::uint8_t>> bits;
};

/// Bits are drawn round by round, edges in key order within a round, so
/// |K_e| = n L_e. Throws Error(PreconditionFailed) for non-integer rates.
KeyMaterial generate_keys(const WeightedGraph& g, std::int64_t rounds, std::uint64_t seed);

/// Consumes key bits in order; throws Error(KeyDepleted) when an edge runs dry.
class KeyPool {
 public:
  KeyPool(const WeightedGraph& g, const KeyMaterial& km);
  std::uint8_t take(EdgeKey e);
  std::int64_t used(std::size_t edge_index) const { return cursor_.at(edge_index); }
  /// Round in which the most recently taken bit of `e` was generated.
  std::int64_t last_round(EdgeKey e) const;

 private:
  const WeightedGraph& g_;
  const KeyMaterial& km_;
  std::vector<std::int64_t> cursor_;
};

/// Removing the conference edge (i, j) splits the tree into subtrees rooted at
/// i and j. Every other vertex has one inbound edge toward its root; in_i and
/// in_j are the conference edge itself.
struct TreeOrientation {
  SpanningTree tree;
  EdgeKey conference;
  std::vector<std::optional<EdgeKey>> in;        // per vertex
  std::vector<std::optional<VertexId>> parent;   // per vertex, none for roots
  std::vector<std::vector<EdgeKey>> out;         // per vertex, sorted

  std::size_t node_count() const { return in.size(); }
  bool is_root(VertexId v) const { return conference.touches(v); }
};

/// `conference` defaults to the smallest tree edge. Throws Error(InvalidEdge)
/// if it is not a tree edge and Error(InvalidPacking) if `t` is not a tree.
TreeOrientation orient_tree(const SpanningTree& t, std::optional<EdgeKey> conference = std::nullopt);

/// One key bit per tree edge for one tree instance.
struct TreeKeys {
  std::map<EdgeKey, std::uint8_t> bit;
  std::map<EdgeKey, std::int64_t> round;

  std::uint8_t at(EdgeKey e) const;
};

TreeKeys draw_tree_keys(const SpanningTree& t, KeyPool& pool);

/// C_e^(a) = K_in(a) xor K_e, published by vertex a for an outbound edge e.
struct Announcement {
  std::size_t tree = 0;
  std::int64_t round = 0;
  VertexId announcer = 0;
  EdgeKey edge;
  EdgeKey via;  // in_a
  std::uint8_t bit = 0;
};

/// Single-round variant: all announcements at once, vertices in index order.
std::vector<Announcement> announce(const TreeOrientation& o, const TreeKeys& keys, std::size_t tree_index = 0);

struct Recovery {
  std::uint8_t bit = 0;
  std::optional<EdgeKey> own_edge;  // K of this edge starts the chain; none at a root
  /// (announcer, edge) of every ciphertext folded in, nearest first.
  std::vector<std::pair<VertexId, EdgeKey>> chain;
};

/// Walks from `node` toward its root xoring ciphertexts onto its own key.
/// Only the key of an edge at `node` is read. Throws Error(IncompleteTranscript).
Recovery recover(VertexId node, const TreeOrientation& o, const std::vector<Announcement>& announcements,
                 const TreeKeys& keys);

struct SecurityBudget {
  std::vector<Rational> per_tree;  // tree instances in packing order
  Rational merged;
};

/// Sums epsilon over each tree instance, then over all instances.
SecurityBudget security_budget(const WeightedGraph& g, const TreePacking& pk);

struct ProtocolTranscript {
  std::uint64_t seed = 0;
  std::string algorithm = kKeyGenerator;
  std::int64_t rounds = 0;
  std::vector<std::vector<std::uint8_t>> key_bits;  // K_e per edge
  std::vector<EdgeKey> conference_edges;            // per tree instance
  std::vector<Announcement> announcements;
  std::vector<std::string> recovered;               // per node, '0'/'1' string
  std::string conference_key;
  bool unanimous = true;
  std::vector<std::int64_t> bits_used;              // per edge
  SecurityBudget budget;
};

/// Executes every tree instance of the packing (weighted packings are converted
/// to multigraph form first) and checks that all nodes agree.
ProtocolTranscript run_packing_protocol(const WeightedGraph& g, const TreePacking& pk, std::uint64_t seed);

struct AuditHistogram {
  std::string transcript;                  // concatenated announcement bits
  std::map<std::string, std::size_t> counts;  // conference value -> assignments
};

inline constexpr std::size_t kMaxAuditHistograms = 64;

struct SecrecyAudit {
  std::size_t total_bits = 0;
  std::size_t tree_count = 0;
  std::uint64_t assignments = 0;
  std::size_t reused_bits = 0;  // bit uses beyond an edge's key length
  std::size_t distinct_transcripts = 0;
  bool uniform = true;
  std::vector<std::string> violations;
  /// First kMaxAuditHistograms transcripts in numeric order.
  std::vector<AuditHistogram> histograms;
};

/// Enumerates every assignment of the key bits. A packing that uses an edge
/// more often than it has bits reuses bits cyclically; the audit reports it.
/// Throws Error(OracleLimit) past limits.audit_bits.
SecrecyAudit secrecy_audit(const WeightedGraph& g, const TreePacking& pk, const Limits& limits = {});

}  // namespace qnet
