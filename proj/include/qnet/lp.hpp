#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qnet/graph.hpp"
#include "qnet/limits.hpp"
#include "qnet/rational.hpp"
#include "qnet/tree_packing.hpp"

namespace qnet {

// ---- generic exact simplex -------------------------------------------------

/// maximize c.x  subject to  A x <= b, x >= 0, with b >= 0 (origin feasible).
struct SimplexProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> a;  // row-major, rows * cols
  std::vector<Rational> b;
  std::vector<Rational> c;

  Rational& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
  const Rational& at(std::size_t r, std::size_t col) const { return a[r * cols + col]; }
};

enum class SimplexStatus { Optimal, Unbounded };

struct SimplexResult {
  SimplexStatus status = SimplexStatus::Optimal;
  Rational objective;
  std::vector<Rational> x;
  /// Shadow prices of the rows; an optimal solution of the dual program.
  std::vector<Rational> duals;
  /// Basic column per row; indices >= cols are slacks (cols + row).
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

/// Dense rational tableau with Bland's rule. Throws Error(PreconditionFailed)
/// if some b is negative and Error(SolverLimit) past limits.max_pivots.
SimplexResult simplex_maximize(const SimplexProblem& problem, const Limits& limits = {});

/// Solves the square system M x = rhs exactly. Returns nullopt when singular.
std::optional<std::vector<Rational>> solve_linear_system(std::vector<Rational> m, std::vector<Rational> rhs,
                                                         std::size_t n);

// ---- communication-for-omniscience LP ----------------------------------------

struct LPConstraint {
  std::vector<VertexId> subset;  // sorted
  std::uint32_t mask = 0;
  Rational rhs;  // r[E(I)]
};

/// minimize sum R_i  s.t.  sum_{i in I} R_i >= r[E(I)]  for every nonempty proper I.
struct LPInstance {
  std::vector<std::string> labels;
  std::size_t variables = 0;
  /// Increasing size, then lexicographic; 2^N - 2 rows.
  std::vector<LPConstraint> constraints;
  Rational total_rate;
};

struct LPSolution {
  std::vector<Rational> node_rates;  // R_i
  Rational omniscience;              // R_CO
  Rational z;                        // total rate - R_CO
  /// Dual multiplier per constraint (instance order); the optimality certificate.
  std::vector<Rational> multipliers;
  /// Basic columns of the dual tableau: j < constraints.size() is a
  /// multiplier, constraints.size() + i is the slack of node i.
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;
};

/// Throws Error(TrivialNetwork) for N < 2, Error(ExactModeLimit) past limits.lp_nodes.
LPInstance build_lp(const WeightedGraph& g, const Limits& limits = {});

/// Solved through the dual  max sum rhs_I y_I  s.t.  sum_{I contains i} y_I <= 1,
/// y >= 0, whose origin is feasible. R comes back as the dual prices.
LPSolution solve_lp(const LPInstance& inst, const Limits& limits = {});

Rational solve_z(const WeightedGraph& g, const Limits& limits = {});

struct OptimalityCheck {
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool objectives_match = false;
  std::optional<std::size_t> violated_constraint;

  bool optimal() const { return primal_feasible && dual_feasible && objectives_match; }
};

/// Checks the solution against the instance using only exact arithmetic.
OptimalityCheck verify_optimality(const LPInstance& inst, const LPSolution& sol);

/// Rebuilds R, y and the objective from the basis alone by Gaussian elimination.
/// Throws Error(PreconditionFailed) for a singular or malformed basis.
LPSolution reevaluate_basis(const LPInstance& inst, const std::vector<std::size_t>& basis);

/// Plain inequality listing, one constraint per line.
std::string lp_to_text(const LPInstance& inst);

// ---- per-node announcement rates ---------------------------------------------

enum class RatesSource { FromLP, FromPacking, ExplicitNoBottleneck };

struct CommunicationRates {
  std::vector<Rational> rates;
  RatesSource source = RatesSource::FromLP;

  Rational total() const;
};

std::string to_string(RatesSource source);

CommunicationRates rates_from_lp(const LPSolution& sol);

/// R_i = sum_a w_a (d_i^a - 1) + 1/2 sum_{e at i} (r_e - usage_e).
/// Throws Error(InvalidPacking) when validate_packing fails.
CommunicationRates rates_from_packing(const WeightedGraph& g, const TreePacking& pk);

/// R_i = r[E_i] - r[E]/(N-1). Throws Error(PreconditionFailed) on a bottleneck.
CommunicationRates explicit_rates_no_bottleneck(const WeightedGraph& g, const Limits& limits = {});

struct ConstraintCheck {
  bool satisfied = true;
  std::optional<std::vector<VertexId>> violated;  // first failing I
  Rational lhs;
  Rational rhs;
};

/// Exact check of every constraint in increasing-size, lexicographic order.
ConstraintCheck verify_constraints(const WeightedGraph& g, const CommunicationRates& rates,
                                   const Limits& limits = {});

}  // namespace qnet
