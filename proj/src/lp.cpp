#include "qnet/lp.hpp"

#include <sstream>

#include "qnet/error.hpp"
#include "qnet/rate.hpp"

namespace qnet {
namespace {

// Tableau entries stay as raw mpq_class so the row updates use GMP's
// expression templates instead of building Rational temporaries.
struct Tableau {
  std::size_t rows;
  std::size_t width;  // structural + slack + rhs
  std::vector<mpq_class> cell;
  std::vector<mpq_class> objective;

  mpq_class& at(std::size_t r, std::size_t c) { return cell[r * width + c]; }

  void pivot(std::size_t pr, std::size_t pc) {
    const mpq_class inv = 1 / at(pr, pc);
    for (std::size_t c = 0; c < width; ++c) {
      if (sgn(at(pr, c)) != 0) at(pr, c) *= inv;
    }
    auto eliminate = [&](mpq_class* row) {
      if (sgn(row[pc]) == 0) return;
      const mpq_class f = row[pc];
      for (std::size_t c = 0; c < width; ++c) {
        const mpq_class& p = at(pr, c);
        if (sgn(p) != 0) row[c] -= f * p;
      }
    };
    for (std::size_t r = 0; r < rows; ++r) {
      if (r != pr) eliminate(&cell[r * width]);
    }
    eliminate(objective.data());
  }
};

}  // namespace

SimplexResult simplex_maximize(const SimplexProblem& problem, const Limits& limits) {
  const std::size_t m = problem.rows;
  const std::size_t n = problem.cols;
  if (problem.a.size() != m * n || problem.b.size() != m || problem.c.size() != n) {
    throw Error(ErrorCode::PreconditionFailed, "simplex dimensions do not match");
  }
  for (const auto& bi : problem.b) {
    if (bi.sign() < 0) throw Error(ErrorCode::PreconditionFailed, "simplex needs b >= 0");
  }

  Tableau t{m, n + m + 1, std::vector<mpq_class>(m * (n + m + 1)), std::vector<mpq_class>(n + m + 1)};
  const std::size_t rhs = n + m;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) t.at(r, c) = problem.at(r, c).raw();
    t.at(r, n + r) = 1;
    t.at(r, rhs) = problem.b[r].raw();
  }
  for (std::size_t c = 0; c < n; ++c) t.objective[c] = -problem.c[c].raw();

  SimplexResult result;
  result.basis.resize(m);
  for (std::size_t r = 0; r < m; ++r) result.basis[r] = n + r;

  while (true) {
    // Bland: lowest-index improving column, then lowest-index leaving variable.
    std::size_t entering = rhs;
    for (std::size_t c = 0; c < rhs; ++c) {
      if (sgn(t.objective[c]) < 0) {
        entering = c;
        break;
      }
    }
    if (entering == rhs) break;

    std::size_t leaving = m;
    mpq_class best_ratio;
    for (std::size_t r = 0; r < m; ++r) {
      if (sgn(t.at(r, entering)) <= 0) continue;
      mpq_class ratio = t.at(r, rhs) / t.at(r, entering);
      if (leaving == m || ratio < best_ratio ||
          (ratio == best_ratio && result.basis[r] < result.basis[leaving])) {
        leaving = r;
        best_ratio = ratio;
      }
    }
    if (leaving == m) {
      result.status = SimplexStatus::Unbounded;
      return result;
    }
    if (++result.pivots > limits.max_pivots) {
      throw Error(ErrorCode::SolverLimit, "simplex exceeded " + std::to_string(limits.max_pivots) + " pivots");
    }
    t.pivot(leaving, entering);
    result.basis[leaving] = entering;
  }

  result.x.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r) {
    if (result.basis[r] < n) result.x[result.basis[r]] = Rational(t.at(r, rhs));
  }
  result.duals.reserve(m);
  for (std::size_t r = 0; r < m; ++r) result.duals.emplace_back(t.objective[n + r]);
  result.objective = Rational(t.objective[rhs]);
  return result;
}

std::optional<std::vector<Rational>> solve_linear_system(std::vector<Rational> m, std::vector<Rational> rhs,
                                                         std::size_t n) {
  if (m.size() != n * n || rhs.size() != n) return std::nullopt;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv * n + col].is_zero()) ++piv;
    if (piv == n) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m[piv * n + c], m[col * n + c]);
      std::swap(rhs[piv], rhs[col]);
    }
    const Rational inv = Rational(1) / m[col * n + col];
    for (std::size_t c = col; c < n; ++c) m[col * n + c] *= inv;
    rhs[col] *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r * n + col].is_zero()) continue;
      const Rational f = m[r * n + col];
      for (std::size_t c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
      rhs[r] -= f * rhs[col];
    }
  }
  return rhs;
}

LPInstance build_lp(const WeightedGraph& g, const Limits& limits) {
  const std::size_t n = g.node_count();
  if (n < 2) throw Error(ErrorCode::TrivialNetwork, "the LP needs at least two nodes");
  if (n > limits.lp_nodes) {
    throw Error(ErrorCode::ExactModeLimit,
                "LP over " + std::to_string(n) + " nodes exceeds cap " + std::to_string(limits.lp_nodes));
  }
  LPInstance inst;
  inst.labels = g.labels();
  inst.variables = n;
  inst.total_rate = g.total_rate();
  for_each_proper_subset(n, [&](std::span<const VertexId> subset) {
    LPConstraint c;
    c.subset.assign(subset.begin(), subset.end());
    for (VertexId v : subset) c.mask |= std::uint32_t{1} << v;
    for (const auto& e : g.edges()) {
      if ((c.mask >> e.key.u & 1U) && (c.mask >> e.key.v & 1U)) c.rhs += e.rate;
    }
    inst.constraints.push_back(std::move(c));
    return true;
  });
  return inst;
}

LPSolution solve_lp(const LPInstance& inst, const Limits& limits) {
  const std::size_t n = inst.variables;
  const std::size_t k = inst.constraints.size();

  // Constraints with rhs 0 are implied by R >= 0 and contribute nothing to the
  // dual objective, so their multipliers are left out of the tableau.
  std::vector<std::size_t> column_of;
  for (std::size_t j = 0; j < k; ++j) {
    if (inst.constraints[j].rhs.sign() > 0) column_of.push_back(j);
  }

  SimplexProblem dual;
  dual.rows = n;
  dual.cols = column_of.size();
  dual.a.assign(dual.rows * dual.cols, Rational(0));
  dual.b.assign(n, Rational(1));
  for (std::size_t c = 0; c < dual.cols; ++c) {
    const auto& con = inst.constraints[column_of[c]];
    dual.c.push_back(con.rhs);
    for (VertexId v : con.subset) dual.at(v, c) = 1;
  }

  SimplexResult res = simplex_maximize(dual, limits);
  if (res.status != SimplexStatus::Optimal) {
    throw Error(ErrorCode::SolverLimit, "dual of the omniscience LP reported unbounded");
  }

  LPSolution sol;
  sol.node_rates = res.duals;
  for (const auto& r : sol.node_rates) sol.omniscience += r;
  sol.z = inst.total_rate - sol.omniscience;
  sol.multipliers.assign(k, Rational(0));
  for (std::size_t c = 0; c < dual.cols; ++c) sol.multipliers[column_of[c]] = res.x[c];
  for (std::size_t b : res.basis) sol.basis.push_back(b < dual.cols ? column_of[b] : k + (b - dual.cols));
  sol.pivots = res.pivots;
  return sol;
}

Rational solve_z(const WeightedGraph& g, const Limits& limits) {
  return solve_lp(build_lp(g, limits), limits).z;
}

OptimalityCheck verify_optimality(const LPInstance& inst, const LPSolution& sol) {
  OptimalityCheck out;
  const std::size_t n = inst.variables;
  if (sol.node_rates.size() != n || sol.multipliers.size() != inst.constraints.size()) return out;

  out.primal_feasible = true;
  for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
    Rational lhs;
    for (VertexId v : inst.constraints[j].subset) lhs += sol.node_rates[v];
    if (lhs < inst.constraints[j].rhs) {
      out.primal_feasible = false;
      out.violated_constraint = j;
      break;
    }
  }

  out.dual_feasible = true;
  std::vector<Rational> load(n);
  Rational dual_value;
  for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
    const Rational& y = sol.multipliers[j];
    if (y.sign() < 0) out.dual_feasible = false;
    for (VertexId v : inst.constraints[j].subset) load[v] += y;
    dual_value += y * inst.constraints[j].rhs;
  }
  for (const auto& l : load) {
    if (l > Rational(1)) out.dual_feasible = false;
  }

  Rational primal_value;
  for (const auto& r : sol.node_rates) primal_value += r;
  out.objectives_match = primal_value == dual_value && sol.omniscience == primal_value &&
                         sol.z == inst.total_rate - primal_value;
  return out;
}

LPSolution reevaluate_basis(const LPInstance& inst, const std::vector<std::size_t>& basis) {
  const std::size_t n = inst.variables;
  const std::size_t k = inst.constraints.size();
  if (basis.size() != n) throw Error(ErrorCode::PreconditionFailed, "basis size must equal node count");

  // Column of the dual constraint matrix [A^T | I] for an extended index.
  auto column = [&](std::size_t j) {
    std::vector<Rational> col(n, Rational(0));
    if (j < k) {
      for (VertexId v : inst.constraints[j].subset) col[v] = 1;
    } else if (j - k < n) {
      col[j - k] = 1;
    } else {
      throw Error(ErrorCode::PreconditionFailed, "basis index out of range");
    }
    return col;
  };

  std::vector<Rational> bmat(n * n), bt(n * n), cost(n);
  for (std::size_t c = 0; c < n; ++c) {
    auto col = column(basis[c]);
    for (std::size_t r = 0; r < n; ++r) {
      bmat[r * n + c] = col[r];
      bt[c * n + r] = col[r];
    }
    cost[c] = basis[c] < k ? inst.constraints[basis[c]].rhs : Rational(0);
  }
  auto xb = solve_linear_system(bmat, std::vector<Rational>(n, Rational(1)), n);
  auto prices = solve_linear_system(bt, cost, n);
  if (!xb || !prices) throw Error(ErrorCode::PreconditionFailed, "basis matrix is singular");

  LPSolution sol;
  sol.basis = basis;
  sol.node_rates = *prices;
  for (const auto& r : sol.node_rates) sol.omniscience += r;
  sol.z = inst.total_rate - sol.omniscience;
  sol.multipliers.assign(k, Rational(0));
  for (std::size_t c = 0; c < n; ++c) {
    if (basis[c] < k) sol.multipliers[basis[c]] = (*xb)[c];
  }
  return sol;
}

std::string lp_to_text(const LPInstance& inst) {
  std::ostringstream out;
  auto var = [&](VertexId v) { return "R_" + inst.labels[v]; };
  out << "minimize";
  for (VertexId v = 0; v < inst.variables; ++v) out << (v ? " + " : " ") << var(v);
  out << "\nsubject to\n";
  for (const auto& c : inst.constraints) {
    out << " ";
    for (std::size_t i = 0; i < c.subset.size(); ++i) out << (i ? " + " : " ") << var(c.subset[i]);
    out << " >= " << c.rhs.pretty() << "\n";
  }
  out << "Z = " << inst.total_rate.pretty() << " - R_CO\n";
  return out.str();
}

Rational CommunicationRates::total() const {
  Rational sum;
  for (const auto& r : rates) sum += r;
  return sum;
}

std::string to_string(RatesSource source) {
  switch (source) {
    case RatesSource::FromLP: return "lp";
    case RatesSource::FromPacking: return "packing";
    case RatesSource::ExplicitNoBottleneck: return "explicit-no-bottleneck";
  }
  return "lp";
}

CommunicationRates rates_from_lp(const LPSolution& sol) {
  return CommunicationRates{sol.node_rates, RatesSource::FromLP};
}

CommunicationRates rates_from_packing(const WeightedGraph& g, const TreePacking& pk) {
  if (auto check = validate_packing(g, pk); !check.valid) {
    throw Error(ErrorCode::InvalidPacking, check.reason);
  }
  const TreePacking w = weighted_from_multigraph(pk);
  const std::size_t n = g.node_count();
  CommunicationRates out{std::vector<Rational>(n), RatesSource::FromPacking};

  for (std::size_t t = 0; t < w.trees.size(); ++t) {
    std::vector<long> degree(n, 0);
    for (const auto& key : w.trees[t].edges) {
      ++degree[key.u];
      ++degree[key.v];
    }
    for (VertexId v = 0; v < n; ++v) out.rates[v] += w.weights[t] * Rational(degree[v] - 1);
  }
  // Leftover key on each edge is announced half by each endpoint.
  auto usage = edge_usage(g, w);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    Rational half = (g.edge(i).rate - usage[i]) / Rational(2);
    out.rates[g.edge(i).key.u] += half;
    out.rates[g.edge(i).key.v] += half;
  }
  return out;
}

CommunicationRates explicit_rates_no_bottleneck(const WeightedGraph& g, const Limits& limits) {
  auto cert = check_no_bottleneck(g, limits);
  if (!cert.bottleneck_free()) {
    throw Error(ErrorCode::PreconditionFailed, "network has a bottleneck; the explicit solution does not apply");
  }
  const Rational share = finest_bound(g);
  CommunicationRates out{{}, RatesSource::ExplicitNoBottleneck};
  for (VertexId v = 0; v < g.node_count(); ++v) out.rates.push_back(g.incident_rate(v) - share);
  return out;
}

ConstraintCheck verify_constraints(const WeightedGraph& g, const CommunicationRates& rates, const Limits& limits) {
  const std::size_t n = g.node_count();
  if (rates.rates.size() != n) throw Error(ErrorCode::MalformedInput, "one rate per node expected");
  if (n > limits.lp_nodes) {
    throw Error(ErrorCode::ExactModeLimit, "constraint check exceeds the LP node cap");
  }
  ConstraintCheck out;
  std::vector<bool> inside(n);
  for_each_proper_subset(n, [&](std::span<const VertexId> subset) {
    std::fill(inside.begin(), inside.end(), false);
    Rational lhs;
    for (VertexId v : subset) {
      inside[v] = true;
      lhs += rates.rates[v];
    }
    Rational rhs;
    for (const auto& e : g.edges()) {
      if (inside[e.key.u] && inside[e.key.v]) rhs += e.rate;
    }
    if (lhs >= rhs) return true;
    out.satisfied = false;
    out.violated = std::vector<VertexId>(subset.begin(), subset.end());
    out.lhs = lhs;
    out.rhs = rhs;
    return false;
  });
  return out;
}

}  // namespace qnet
