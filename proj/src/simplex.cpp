#include "mlecone/simplex.hpp"

#include <cstdlib>

namespace mlecone {

namespace {

// Dense tableau over the standard form  max c'u : M u = b, u >= 0  with one
// artificial column per row forming the initial basis.
struct Tableau {
  std::size_t m = 0;       // rows
  std::size_t n = 0;       // structural columns
  std::size_t ncols = 0;   // n + m artificials
  std::vector<QVec> t;     // m x (ncols + 1), last column = rhs
  std::vector<std::size_t> basis;
  QVec obj;                // reduced-cost row, ncols entries
  Rational obj_val;
  bool bar_artificials = false;

  void set_costs(const QVec& c) {
    obj.assign(ncols, Rational(0));
    obj_val = 0;
    for (std::size_t j = 0; j < ncols; ++j) obj[j] = j < c.size() ? c[j] : 0;
    for (std::size_t i = 0; i < m; ++i) {
      Rational cb = basis[i] < c.size() ? c[basis[i]] : Rational(0);
      if (cb == 0) continue;
      for (std::size_t j = 0; j < ncols; ++j)
        if (t[i][j] != 0) obj[j] -= cb * t[i][j];
      obj_val += cb * t[i][ncols];
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    Rational p = t[r][c];
    for (auto& x : t[r]) x /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][c] == 0) continue;
      Rational f = t[i][c];
      for (std::size_t j = 0; j <= ncols; ++j)
        if (t[r][j] != 0) t[i][j] -= f * t[r][j];
    }
    if (obj[c] != 0) {
      Rational f = obj[c];
      for (std::size_t j = 0; j < ncols; ++j)
        if (t[r][j] != 0) obj[j] -= f * t[r][j];
      obj_val += f * t[r][ncols];
    }
    basis[r] = c;
  }

  // Bland's rule: smallest improving column, leaving row by min ratio with
  // smallest basic index on ties. Returns false on unboundedness.
  bool optimize() {
    for (;;) {
      std::size_t enter = ncols;
      const std::size_t limit = bar_artificials ? n : ncols;
      for (std::size_t j = 0; j < limit; ++j)
        if (obj[j] > 0) { enter = j; break; }
      if (enter == ncols) return true;

      std::size_t leave = m;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][enter] <= 0) continue;
        Rational ratio = t[i][ncols] / t[i][enter];
        if (leave == m || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

SimplexResult simplex_solve(const RationalLP& lp) {
  const std::size_t n_orig = static_cast<std::size_t>(lp.num_vars);
  for (const auto& row : lp.rows)
    if (row.coeffs.size() != n_orig)
      throw DimensionError("constraint arity mismatch");

  // Variable substitutions: x = shift + u_pos  or  x = u_pos - u_neg.
  struct VarMap {
    std::size_t pos;
    std::size_t neg;  // == npos unless free
    Rational shift;
  };
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::vector<VarMap> vmap(n_orig);
  std::size_t n_std = 0;
  for (std::size_t i = 0; i < n_orig; ++i) {
    if (lp.lower[i].has_value()) {
      vmap[i] = {n_std++, npos, *lp.lower[i]};
    } else {
      vmap[i] = {n_std, n_std + 1, Rational(0)};
      n_std += 2;
    }
  }

  // Rows: originals, then upper-bound rows x_i <= u_i.
  struct StdRow {
    QVec coeffs;  // over std vars
    Rel rel;
    Rational rhs;
  };
  std::vector<StdRow> srows;
  auto substitute = [&](const QVec& coeffs, const Rational& rhs) {
    StdRow r{QVec(n_std, Rational(0)), Rel::Eq, rhs};
    for (std::size_t i = 0; i < n_orig; ++i) {
      if (coeffs[i] == 0) continue;
      r.coeffs[vmap[i].pos] += coeffs[i];
      if (vmap[i].neg != npos) r.coeffs[vmap[i].neg] -= coeffs[i];
      if (vmap[i].shift != 0) r.rhs -= coeffs[i] * vmap[i].shift;
    }
    return r;
  };
  for (const auto& row : lp.rows) {
    StdRow r = substitute(row.coeffs, row.rhs);
    r.rel = row.rel;
    srows.push_back(std::move(r));
  }
  for (std::size_t i = 0; i < n_orig; ++i) {
    if (!lp.upper[i].has_value()) continue;
    QVec coeffs(n_orig, Rational(0));
    coeffs[i] = 1;
    StdRow r = substitute(coeffs, *lp.upper[i]);
    r.rel = Rel::Le;
    srows.push_back(std::move(r));
  }

  // Slack/surplus, then b >= 0 normalization.
  const std::size_t m = srows.size();
  std::size_t n_slack = 0;
  for (const auto& r : srows)
    if (r.rel != Rel::Eq) ++n_slack;
  const std::size_t n = n_std + n_slack;

  Tableau tab;
  tab.m = m;
  tab.n = n;
  tab.ncols = n + m;
  tab.t.assign(m, QVec(tab.ncols + 1, Rational(0)));
  tab.basis.resize(m);
  std::vector<int> row_sign(m, 1);
  std::size_t slack_at = n_std;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n_std; ++j) tab.t[i][j] = srows[i].coeffs[j];
    if (srows[i].rel != Rel::Eq)
      tab.t[i][slack_at++] = srows[i].rel == Rel::Le ? 1 : -1;
    tab.t[i][tab.ncols] = srows[i].rhs;
    if (tab.t[i][tab.ncols] < 0) {
      row_sign[i] = -1;
      for (auto& x : tab.t[i]) x = -x;
    }
    tab.t[i][n + i] = 1;  // artificial
    tab.basis[i] = n + i;
  }

  // Phase 1: max -sum(artificials).
  QVec phase1(tab.ncols, Rational(0));
  for (std::size_t i = 0; i < m; ++i) phase1[n + i] = -1;
  tab.set_costs(phase1);
  tab.optimize();  // bounded below by -sum b
  if (tab.obj_val != 0) return {LpStatus::Infeasible, 0, {}, {}};

  // Pivot remaining artificials out where a structural entry exists;
  // all-zero rows are redundant and their artificials stay basic at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (tab.t[i][j] != 0) {
        tab.pivot(i, j);
        break;
      }
  }

  // Phase 2.
  QVec phase2(tab.ncols, Rational(0));
  for (std::size_t i = 0; i < n_orig; ++i) {
    phase2[vmap[i].pos] += lp.objective[i];
    if (vmap[i].neg != npos) phase2[vmap[i].neg] -= lp.objective[i];
  }
  Rational obj_shift = 0;
  for (std::size_t i = 0; i < n_orig; ++i)
    if (vmap[i].shift != 0) obj_shift += lp.objective[i] * vmap[i].shift;
  tab.bar_artificials = true;
  tab.set_costs(phase2);
  if (!tab.optimize()) return {LpStatus::Unbounded, 0, {}, {}};

  SimplexResult res;
  res.status = LpStatus::Optimal;
  res.objective = tab.obj_val + obj_shift;
  QVec std_val(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis[i] < n) std_val[tab.basis[i]] = tab.t[i][tab.ncols];
  res.primal.resize(n_orig);
  for (std::size_t i = 0; i < n_orig; ++i) {
    res.primal[i] = vmap[i].shift + std_val[vmap[i].pos];
    if (vmap[i].neg != npos) res.primal[i] -= std_val[vmap[i].neg];
  }
  // Duals from the artificial columns: y = c_B B^{-1}; artificial column k
  // of the tableau is B^{-1} e_k. Sign restored for normalized rows.
  res.duals.assign(lp.rows.size(), Rational(0));
  for (std::size_t k = 0; k < lp.rows.size(); ++k) {
    Rational y = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& cb = phase2[tab.basis[i]];
      if (cb != 0 && tab.t[i][n + k] != 0) y += cb * tab.t[i][n + k];
    }
    res.duals[k] = row_sign[k] * y;
  }
  return res;
}

}  // namespace mlecone
