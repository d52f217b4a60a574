#include "qnet/protocol.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "qnet/error.hpp"

namespace qnet {
namespace {

std::string bit_string(std::uint64_t value, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t i = 0; i < width; ++i) {
    if (value >> i & 1U) s[i] = '1';
  }
  return s;
}

TreePacking as_multigraph(const TreePacking& pk) {
  return pk.mode == PackingMode::Multigraph ? pk : multigraph_from_weighted(pk);
}

}  // namespace

KeyMaterial generate_keys(const WeightedGraph& g, std::int64_t rounds, std::uint64_t seed) {
  if (rounds <= 0) throw Error(ErrorCode::MalformedInput, "rounds must be positive");
  if (!g.has_integer_rates()) throw Error(ErrorCode::PreconditionFailed, "key simulation needs integer rates");
  KeyMaterial km;
  km.rounds = rounds;
  km.seed = seed;
  for (const auto& e : g.edges()) km.per_round.push_back(e.rate.to_int64());
  km.bits.resize(g.edge_count());
  std::mt19937_64 rng(seed);
  for (std::int64_t r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
      for (std::int64_t b = 0; b < km.per_round[i]; ++b) km.bits[i].push_back(static_cast<std::uint8_t>(rng() & 1U));
    }
  }
  return km;
}

KeyPool::KeyPool(const WeightedGraph& g, const KeyMaterial& km) : g_(g), km_(km), cursor_(g.edge_count(), 0) {}

std::uint8_t KeyPool::take(EdgeKey e) {
  auto idx = g_.find_edge(e);
  if (!idx) throw Error(ErrorCode::InvalidEdge, "no key material for edge " + g_.edge_label(e));
  auto& pos = cursor_[*idx];
  if (pos >= static_cast<std::int64_t>(km_.bits[*idx].size())) {
    throw Error(ErrorCode::KeyDepleted, "key of edge " + g_.edge_label(e) + " is exhausted");
  }
  return km_.bits[*idx][static_cast<std::size_t>(pos++)];
}

std::int64_t KeyPool::last_round(EdgeKey e) const {
  auto idx = g_.find_edge(e);
  if (!idx || cursor_[*idx] == 0 || km_.per_round[*idx] == 0) return 0;
  return (cursor_[*idx] - 1) / km_.per_round[*idx];
}

TreeOrientation orient_tree(const SpanningTree& t, std::optional<EdgeKey> conference) {
  if (t.edges.empty()) throw Error(ErrorCode::InvalidPacking, "a tree needs at least one edge to orient");
  const std::size_t n = t.edges.size() + 1;
  std::vector<std::vector<EdgeKey>> adjacent(n);
  DisjointSets dsu(n);
  for (const auto& e : t.edges) {
    if (e.v >= n || !dsu.unite(e.u, e.v)) throw Error(ErrorCode::InvalidPacking, "edge list is not a spanning tree");
    adjacent[e.u].push_back(e);
    adjacent[e.v].push_back(e);
  }
  const EdgeKey bar = conference.value_or(t.edges.front());
  if (!std::binary_search(t.edges.begin(), t.edges.end(), bar)) {
    throw Error(ErrorCode::InvalidEdge, "conference edge is not in the tree");
  }

  TreeOrientation o;
  o.tree = t;
  o.conference = bar;
  o.in.assign(n, std::nullopt);
  o.parent.assign(n, std::nullopt);
  o.out.assign(n, {});
  o.in[bar.u] = bar;
  o.in[bar.v] = bar;

  std::deque<VertexId> queue{bar.u, bar.v};
  while (!queue.empty()) {
    VertexId a = queue.front();
    queue.pop_front();
    for (const auto& e : adjacent[a]) {
      if (e == bar || e == o.in[a]) continue;
      VertexId child = e.other(a);
      o.in[child] = e;
      o.parent[child] = a;
      o.out[a].push_back(e);
      queue.push_back(child);
    }
  }
  for (auto& edges : o.out) std::sort(edges.begin(), edges.end());
  return o;
}

std::uint8_t TreeKeys::at(EdgeKey e) const {
  auto it = bit.find(e);
  if (it == bit.end()) throw Error(ErrorCode::KeyDepleted, "no key bit drawn for this edge");
  return it->second;
}

TreeKeys draw_tree_keys(const SpanningTree& t, KeyPool& pool) {
  TreeKeys keys;
  for (const auto& e : t.edges) {
    keys.bit[e] = pool.take(e);
    keys.round[e] = pool.last_round(e);
  }
  return keys;
}

std::vector<Announcement> announce(const TreeOrientation& o, const TreeKeys& keys, std::size_t tree_index) {
  std::vector<Announcement> out;
  for (VertexId a = 0; a < o.node_count(); ++a) {
    for (const auto& e : o.out[a]) {
      const EdgeKey via = *o.in[a];
      Announcement c;
      c.tree = tree_index;
      c.announcer = a;
      c.edge = e;
      c.via = via;
      c.bit = keys.at(via) ^ keys.at(e);
      // Sent once both bits exist.
      auto round_of = [&](EdgeKey k) {
        auto it = keys.round.find(k);
        return it == keys.round.end() ? std::int64_t{0} : it->second;
      };
      c.round = std::max(round_of(via), round_of(e));
      out.push_back(c);
    }
  }
  return out;
}

Recovery recover(VertexId node, const TreeOrientation& o, const std::vector<Announcement>& announcements,
                 const TreeKeys& keys) {
  if (node >= o.node_count()) throw Error(ErrorCode::UnknownNode, "node outside the tree");
  Recovery r;
  if (o.is_root(node)) {
    r.bit = keys.at(o.conference);
    return r;
  }
  r.own_edge = *o.in[node];
  r.bit = keys.at(*r.own_edge);
  VertexId at = node;
  while (!o.is_root(at)) {
    const EdgeKey edge = *o.in[at];
    const VertexId announcer = *o.parent[at];
    auto it = std::find_if(announcements.begin(), announcements.end(), [&](const Announcement& c) {
      return c.announcer == announcer && c.edge == edge;
    });
    if (it == announcements.end()) {
      throw Error(ErrorCode::IncompleteTranscript, "missing announcement for edge (" + std::to_string(edge.u) +
                                                       "," + std::to_string(edge.v) + ")");
    }
    r.bit ^= it->bit;
    r.chain.emplace_back(announcer, edge);
    at = announcer;
  }
  return r;
}

SecurityBudget security_budget(const WeightedGraph& g, const TreePacking& pk) {
  SecurityBudget out;
  for (const auto& t : as_multigraph(pk).expanded()) {
    Rational eps;
    for (const auto& e : t.edges) {
      auto idx = g.find_edge(e);
      if (!idx) throw Error(ErrorCode::InvalidPacking, "tree edge " + g.edge_label(e) + " not in the graph");
      eps += g.edge(*idx).epsilon;
    }
    out.merged += eps;
    out.per_tree.push_back(std::move(eps));
  }
  return out;
}

ProtocolTranscript run_packing_protocol(const WeightedGraph& g, const TreePacking& pk, std::uint64_t seed) {
  if (auto check = validate_packing(g, pk); !check.valid) throw Error(ErrorCode::InvalidPacking, check.reason);
  const TreePacking mg = as_multigraph(pk);
  KeyMaterial km = generate_keys(g, mg.rounds, seed);
  KeyPool pool(g, km);

  ProtocolTranscript tr;
  tr.seed = seed;
  tr.algorithm = km.algorithm;
  tr.rounds = mg.rounds;
  tr.recovered.assign(g.node_count(), std::string());

  const auto instances = mg.expanded();
  for (std::size_t a = 0; a < instances.size(); ++a) {
    TreeOrientation o = orient_tree(instances[a]);
    TreeKeys keys = draw_tree_keys(instances[a], pool);
    auto published = announce(o, keys, a);
    tr.conference_edges.push_back(o.conference);
    const char expected = keys.at(o.conference) ? '1' : '0';
    tr.conference_key.push_back(expected);
    for (VertexId v = 0; v < g.node_count(); ++v) {
      const char got = recover(v, o, published, keys).bit ? '1' : '0';
      tr.recovered[v].push_back(got);
      if (got != expected) tr.unanimous = false;
    }
    tr.announcements.insert(tr.announcements.end(), published.begin(), published.end());
  }
  for (std::size_t i = 0; i < g.edge_count(); ++i) tr.bits_used.push_back(pool.used(i));
  tr.key_bits = std::move(km.bits);
  tr.budget = security_budget(g, mg);
  return tr;
}

SecrecyAudit secrecy_audit(const WeightedGraph& g, const TreePacking& pk, const Limits& limits) {
  if (!g.has_integer_rates()) throw Error(ErrorCode::PreconditionFailed, "audit needs integer rates");
  const TreePacking mg = as_multigraph(pk);
  const auto instances = mg.expanded();
  for (const auto& t : instances) {
    if (!is_spanning_tree(g, t)) throw Error(ErrorCode::InvalidPacking, "audit needs spanning trees of the graph");
  }

  SecrecyAudit audit;
  std::vector<std::size_t> offset(g.edge_count()), capacity(g.edge_count()), uses(g.edge_count(), 0);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    offset[i] = audit.total_bits;
    capacity[i] = static_cast<std::size_t>(g.edge(i).rate.to_int64() * mg.rounds);
    audit.total_bits += capacity[i];
  }
  if (audit.total_bits > limits.audit_bits) {
    throw Error(ErrorCode::OracleLimit, "audit over " + std::to_string(audit.total_bits) + " key bits exceeds cap " +
                                            std::to_string(limits.audit_bits));
  }

  // Each tree instance reduces to bit positions: the conference bit and one
  // xor pair per announcement.
  std::vector<std::size_t> conference_bit;
  std::vector<std::pair<std::size_t, std::size_t>> cipher_bits;
  for (const auto& t : instances) {
    TreeOrientation o = orient_tree(t);
    std::map<EdgeKey, std::size_t> position;
    for (const auto& e : t.edges) {
      const std::size_t idx = *g.find_edge(e);
      if (capacity[idx] == 0) throw Error(ErrorCode::InvalidPacking, "edge " + g.edge_label(e) + " has no key bits");
      if (uses[idx] >= capacity[idx]) ++audit.reused_bits;
      position[e] = offset[idx] + uses[idx] % capacity[idx];
      ++uses[idx];
    }
    conference_bit.push_back(position[o.conference]);
    for (VertexId a = 0; a < o.node_count(); ++a) {
      for (const auto& e : o.out[a]) cipher_bits.emplace_back(position[*o.in[a]], position[e]);
    }
  }
  audit.tree_count = instances.size();
  if (audit.reused_bits > 0) {
    audit.violations.push_back(std::to_string(audit.reused_bits) + " key bit use(s) beyond the available key");
  }

  std::map<std::uint64_t, std::map<std::uint64_t, std::size_t>> histogram;
  audit.assignments = std::uint64_t{1} << audit.total_bits;
  for (std::uint64_t x = 0; x < audit.assignments; ++x) {
    std::uint64_t transcript = 0;
    for (std::size_t c = 0; c < cipher_bits.size(); ++c) {
      transcript |= ((x >> cipher_bits[c].first ^ x >> cipher_bits[c].second) & 1U) << c;
    }
    std::uint64_t value = 0;
    for (std::size_t t = 0; t < conference_bit.size(); ++t) value |= (x >> conference_bit[t] & 1U) << t;
    ++histogram[transcript][value];
  }

  const std::uint64_t values = std::uint64_t{1} << audit.tree_count;
  audit.distinct_transcripts = histogram.size();
  for (const auto& [transcript, counts] : histogram) {
    bool flat = counts.size() == values;
    if (flat) {
      const std::size_t first = counts.begin()->second;
      flat = std::all_of(counts.begin(), counts.end(), [&](const auto& kv) { return kv.second == first; });
    }
    if (!flat && audit.uniform) {
      audit.uniform = false;
      audit.violations.push_back("conference key is not uniform given transcript " +
                                 bit_string(transcript, cipher_bits.size()));
    }
    if (audit.histograms.size() < kMaxAuditHistograms) {
      AuditHistogram h;
      h.transcript = bit_string(transcript, cipher_bits.size());
      for (const auto& [value, count] : counts) h.counts[bit_string(value, audit.tree_count)] = count;
      audit.histograms.push_back(std::move(h));
    }
  }
  return audit;
}

}  // namespace qnet
