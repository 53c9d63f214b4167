#include "mlecone/existence.hpp"

#include <algorithm>
#include <cassert>

#include "mlecone/parallel.hpp"

namespace mlecone {

namespace {

QVec flat_margins(const ContingencyTable& table, const SimplicialComplex& model,
                  FaceMode mode) {
  const auto flat = margins_vector(table, model, mode).flat();
  QVec t(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) t[i] = to_rational(flat[i]);
  return t;
}

// Dual-form certificate for one facial cell: a vector y with A'y >= e_cell
// and y.t = 0, so c = -y supports the cone at t and is strict at the cell.
QVec cell_certificate(const DesignMatrix& a, const QVec& t, std::size_t cell) {
  const std::size_t v = a.row_count;
  RationalLP lp(static_cast<int>(v));
  for (std::size_t j = 0; j < v; ++j) {
    lp.set_free(static_cast<int>(j));
    lp.objective[j] = -t[j];  // max -t.y == min t.y
  }
  for (std::size_t i = 0; i < a.col_count; ++i) {
    QVec row(v, Rational(0));
    for (std::uint32_t r : a.column(i)) row[r] = 1;
    lp.add_row(std::move(row), Rel::Ge, i == cell ? Rational(1) : Rational(0));
  }
  SimplexResult res = simplex_solve(lp);
  if (res.status != LpStatus::Optimal || res.objective != 0)
    throw std::logic_error("facial cell lost its certificate; "
                           "inconsistent LP results");
  QVec c(v);
  for (std::size_t j = 0; j < v; ++j) c[j] = -res.primal[j];
  return c;
}

}  // namespace

std::vector<std::size_t> facial_set(const ContingencyTable& table,
                                    const SimplicialComplex& model, int jobs,
                                    FaceMode mode) {
  const DesignMatrix a = build_design_matrix(table.spec, model, mode);
  const QVec t = flat_margins(table, model, mode);
  const std::size_t cells = a.col_count;

  std::vector<char> in_set(cells, 0);
  parallel_for(cells, jobs, [&](std::size_t i) {
    RationalLP lp(static_cast<int>(cells));
    lp.objective[i] = 1;
    lp.upper[i] = Rational(1);
    for (std::size_t r = 0; r < a.row_count; ++r) {
      QVec row(cells, Rational(0));
      for (std::uint32_t c : a.rows[r]) row[c] = 1;
      lp.add_row(std::move(row), Rel::Eq, t[r]);
    }
    SimplexResult res = simplex_solve(lp);
    if (res.status == LpStatus::Infeasible) {
      // the cap x_i <= 1 cut off every solution: x_i is forced positive
      in_set[i] = 0;
      return;
    }
    if (res.status != LpStatus::Optimal)
      throw std::logic_error("per-cell LP cannot be unbounded: x_i is capped");
    in_set[i] = res.objective == 0;
  });

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cells; ++i)
    if (in_set[i]) out.push_back(i);
  return out;
}

ExistenceVerdict mle_exists(const ContingencyTable& table,
                            const SimplicialComplex& model, int jobs,
                            FaceMode mode) {
  const DesignMatrix a = build_design_matrix(table.spec, model, mode);
  const QVec t = flat_margins(table, model, mode);
  const std::size_t cells = a.col_count;

  // Variables: y_i = x_i - epsilon >= 0, plus free epsilon.
  // Rows: A y + (A 1) epsilon = t;  epsilon <= 1.
  RationalLP lp(static_cast<int>(cells) + 1);
  const int eps = static_cast<int>(cells);
  lp.set_free(eps);
  lp.upper[eps] = Rational(1);
  lp.objective[eps] = 1;
  for (std::size_t r = 0; r < a.row_count; ++r) {
    QVec row(cells + 1, Rational(0));
    for (std::uint32_t c : a.rows[r]) row[c] = 1;
    row[eps] = static_cast<long>(a.rows[r].size());  // (A 1)_r
    lp.add_row(std::move(row), Rel::Eq, t[r]);
  }
  SimplexResult res = simplex_solve(lp);
  if (res.status != LpStatus::Optimal)
    throw std::logic_error("interiority LP must be solvable: x = n is feasible");

  ExistenceVerdict verdict;
  verdict.epsilon_star = res.objective;
  verdict.exists = res.objective > 0;
  if (verdict.exists) {
    verdict.witness.resize(cells);
    for (std::size_t i = 0; i < cells; ++i)
      verdict.witness[i] = res.primal[i] + res.primal[eps];
    return verdict;
  }

  verdict.facial_cells = facial_set(table, model, jobs, mode);
  assert(!verdict.facial_cells.empty());
  QVec cert(a.row_count, Rational(0));
  for (std::size_t cell : verdict.facial_cells) {
    QVec c = cell_certificate(a, t, cell);
    for (std::size_t j = 0; j < a.row_count; ++j) cert[j] += c[j];
  }
  verdict.certificate = std::move(cert);
  return verdict;
}

KernelWitness exists_kernel_witness(const ContingencyTable& table,
                                    const SimplicialComplex& model,
                                    FaceMode mode) {
  const DesignMatrix a = build_design_matrix(table.spec, model, mode);
  const std::size_t cells = a.col_count;

  // Variables: free z per cell, free epsilon.
  // Rows: A z = 0;  z_i - epsilon >= -n_i;  epsilon <= 1.
  RationalLP lp(static_cast<int>(cells) + 1);
  const int eps = static_cast<int>(cells);
  for (int i = 0; i <= static_cast<int>(cells); ++i) lp.set_free(i);
  lp.upper[eps] = Rational(1);
  lp.objective[eps] = 1;
  for (std::size_t r = 0; r < a.row_count; ++r) {
    QVec row(cells + 1, Rational(0));
    for (std::uint32_t c : a.rows[r]) row[c] = 1;
    lp.add_row(std::move(row), Rel::Eq, 0);
  }
  for (std::size_t i = 0; i < cells; ++i) {
    QVec row(cells + 1, Rational(0));
    row[i] = 1;
    row[eps] = -1;
    lp.add_row(std::move(row), Rel::Ge, to_rational(-table.counts[i]));
  }
  SimplexResult res = simplex_solve(lp);
  if (res.status != LpStatus::Optimal)
    throw std::logic_error("kernel-witness LP must be solvable: z = 0 is feasible");

  KernelWitness kw;
  kw.exists = res.objective > 0;
  kw.z.assign(res.primal.begin(), res.primal.begin() + cells);
  return kw;
}

nlohmann::json verdict_to_json(const ExistenceVerdict& v,
                               const LevelSpec& spec) {
  nlohmann::json j;
  j["exists"] = v.exists;
  j["epsilon"] = to_string(v.epsilon_star);
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t idx : v.facial_cells)
    cells.push_back(cell_of_index(idx, spec));
  j["facial_set"] = std::move(cells);
  if (v.exists) {
    nlohmann::json w = nlohmann::json::array();
    for (const auto& x : v.witness) w.push_back(to_string(x));
    j["witness"] = std::move(w);
  } else {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& x : v.certificate) c.push_back(to_string(x));
    j["certificate"] = std::move(c);
  }
  return j;
}

}  // namespace mlecone
