#pragma once

#include <optional>
#include <vector>

#include "mlecone/rational.hpp"

namespace mlecone {

enum class LpStatus { Optimal, Infeasible, Unbounded };

enum class Rel { Le, Eq, Ge };

struct LinearConstraint {
  QVec coeffs;
  Rel rel = Rel::Le;
  Rational rhs = 0;
};

/// A maximization LP over exact rationals. Variables default to x >= 0;
/// bounds may be shifted, removed (free) or capped per variable.
struct RationalLP {
  int num_vars = 0;
  QVec objective;
  std::vector<LinearConstraint> rows;
  std::vector<std::optional<Rational>> lower;  // nullopt = free below
  std::vector<std::optional<Rational>> upper;  // nullopt = free above

  explicit RationalLP(int n)
      : num_vars(n),
        objective(n, Rational(0)),
        lower(n, Rational(0)),
        upper(n, std::nullopt) {}

  void add_row(QVec coeffs, Rel rel, Rational rhs) {
    rows.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void set_free(int var) { lower[var] = std::nullopt; }
};

struct SimplexResult {
  LpStatus status = LpStatus::Optimal;
  Rational objective;
  QVec primal;  // original variables, valid when Optimal
  QVec duals;   // one multiplier per constraint row, valid when Optimal
};

/// Two-phase dense tableau simplex with Bland's anti-cycling rule.
/// Exact throughout; never panics on degeneracy.
SimplexResult simplex_solve(const RationalLP& lp);

}  // namespace mlecone
