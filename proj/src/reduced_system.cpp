#include "mlecone/reduced_system.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "mlecone/simplex.hpp"

namespace mlecone {

ReducedSystem::Block clique_cone_constraints(const ContingencyTable& table,
                                             const std::vector<int>& clique) {
  ReducedSystem::Block block;
  block.clique = clique;

  // Margin of the table onto the clique, as a table over the clique grid.
  const ContingencyTable marg = margin(table, clique);

  // Saturated complex on the clique's variables, relabeled 1..|clique|.
  std::vector<int> local(clique.size());
  for (std::size_t i = 0; i < clique.size(); ++i) local[i] = static_cast<int>(i + 1);
  const SimplicialComplex simplex_model =
      make_complex(static_cast<int>(clique.size()), {local});
  const DesignMatrix a =
      build_design_matrix(marg.spec, simplex_model, FaceMode::AllFaces);

  // Face labels back in global vertex names.
  for (const auto& f : a.row_faces) {
    std::vector<int> global;
    for (int v : f) global.push_back(clique[v - 1]);
    block.faces.push_back(std::move(global));
  }
  block.face_offset.assign(a.group_offset.begin(), a.group_offset.end());
  block.var_count = a.row_count;

  // Row for cell i: |n| a_i - t. The scaling by the table total normalizes
  // the margins to a probability vector, which is what makes "the system is
  // a linear space" equivalent to existence; with raw counts any functional
  // that is constant on the rays would keep slack.
  const auto t = margins_vector(marg, simplex_model, FaceMode::AllFaces).flat();
  const long long total = marg.total();
  block.inequalities.assign(a.col_count,
                            std::vector<long long>(a.row_count, 0));
  for (std::size_t cell = 0; cell < a.col_count; ++cell) {
    auto& row = block.inequalities[cell];
    for (std::size_t r = 0; r < a.row_count; ++r) row[r] = -t[r];
    for (std::uint32_t r : a.column(cell)) row[r] += total;
  }
  return block;
}

ReducedSystem build_reduced_system(const ContingencyTable& table,
                                   const SimplicialComplex& model,
                                   const ChordalCover& cover) {
  for (const auto& facet : model.facets) {
    bool covered = false;
    for (const auto& clique : cover.cliques)
      if (std::includes(clique.begin(), clique.end(), facet.begin(),
                        facet.end())) {
        covered = true;
        break;
      }
    if (!covered)
      throw DimensionError("cover does not contain model facet");
  }

  ReducedSystem sys;
  for (const auto& clique : cover.cliques) {
    sys.block_var_offset.push_back(sys.total_vars);
    sys.blocks.push_back(clique_cone_constraints(table, clique));
    sys.total_vars += sys.blocks.back().var_count;
    sys.total_inequalities += sys.blocks.back().inequalities.size();
  }

  // One vector equation per cover face absent from the model:
  // sum over the cliques containing it of that face's block equals zero.
  const auto model_faces = faces(model);
  const std::set<std::vector<int>> model_face_set(model_faces.begin(),
                                                  model_faces.end());
  std::map<std::vector<int>, std::vector<std::pair<std::size_t, std::size_t>>>
      shared;
  for (std::size_t b = 0; b < sys.blocks.size(); ++b)
    for (std::size_t g = 0; g < sys.blocks[b].faces.size(); ++g) {
      const auto& face = sys.blocks[b].faces[g];
      if (model_face_set.count(face)) continue;
      shared[face].push_back({b, sys.blocks[b].face_offset[g]});
    }
  for (auto& [face, terms] : shared) {
    ReducedSystem::Equation eq;
    eq.face = face;
    eq.terms = std::move(terms);
    eq.cells = 1;
    for (int v : face)
      eq.cells *= static_cast<std::size_t>(table.spec.levels[v - 1]);
    sys.equations.push_back(std::move(eq));
  }
  return sys;
}

namespace {

// Eliminates equation-pinned variables: each (face, face-cell) equation has
// pairwise distinct variables, so the first becomes minus the sum of the
// rest (or zero). Returns each global variable as a combination of the
// surviving ones, plus the surviving count.
struct Elimination {
  // var -> list of (surviving var id, +-1); empty means the variable is 0.
  std::vector<std::vector<std::pair<std::size_t, int>>> expansion;
  std::size_t survivors = 0;
};

Elimination eliminate(const ReducedSystem& sys) {
  const std::size_t nv = sys.total_vars;
  std::vector<char> pinned(nv, 0);
  for (const auto& eq : sys.equations)
    for (std::size_t cell = 0; cell < eq.cells; ++cell)
      pinned[sys.block_var_offset[eq.terms[0].first] + eq.terms[0].second +
             cell] = 1;

  Elimination el;
  std::vector<std::size_t> new_id(nv, 0);
  for (std::size_t v = 0; v < nv; ++v)
    if (!pinned[v]) new_id[v] = el.survivors++;

  el.expansion.assign(nv, {});
  for (std::size_t v = 0; v < nv; ++v)
    if (!pinned[v]) el.expansion[v] = {{new_id[v], 1}};
  for (const auto& eq : sys.equations)
    for (std::size_t cell = 0; cell < eq.cells; ++cell) {
      std::size_t head = sys.block_var_offset[eq.terms[0].first] +
                         eq.terms[0].second + cell;
      for (std::size_t k = 1; k < eq.terms.size(); ++k) {
        std::size_t other = sys.block_var_offset[eq.terms[k].first] +
                            eq.terms[k].second + cell;
        el.expansion[head].push_back({new_id[other], -1});
      }
    }
  return el;
}

}  // namespace

bool is_linear_space(const ReducedSystem& sys) {
  const Elimination el = eliminate(sys);

  // Inequality rows over surviving variables.
  std::vector<QVec> rows;
  rows.reserve(sys.total_inequalities);
  for (std::size_t b = 0; b < sys.blocks.size(); ++b)
    for (const auto& ineq : sys.blocks[b].inequalities) {
      QVec row(el.survivors, Rational(0));
      for (std::size_t j = 0; j < ineq.size(); ++j) {
        if (ineq[j] == 0) continue;
        for (const auto& [var, sign] : el.expansion[sys.block_var_offset[b] + j])
          row[var] += sign * to_rational(ineq[j]);
      }
      rows.push_back(std::move(row));
    }

  // For each row r: max slack_r = -(g_r . c) subject to all g . c <= 0 and
  // slack_r <= 1; a positive optimum exhibits a non-reversible inequality.
  for (std::size_t r = 0; r < rows.size(); ++r) {
    RationalLP lp(static_cast<int>(el.survivors));
    for (std::size_t v = 0; v < el.survivors; ++v) {
      lp.set_free(static_cast<int>(v));
      lp.objective[v] = -rows[r][v];
    }
    for (const auto& g : rows) lp.add_row(g, Rel::Le, 0);
    {
      QVec cap(el.survivors);
      for (std::size_t v = 0; v < el.survivors; ++v) cap[v] = -rows[r][v];
      lp.add_row(std::move(cap), Rel::Le, 1);
    }
    SimplexResult res = simplex_solve(lp);
    if (res.status != LpStatus::Optimal)
      throw std::logic_error("slack LP is bounded and feasible by construction");
    if (res.objective > 0) return false;
  }
  return true;
}

bool mle_exists_decomposed(const ContingencyTable& table,
                           const SimplicialComplex& model) {
  // An all-zero table has zero margins; no strictly positive table shares
  // them, so the MLE cannot exist.
  if (table.total() == 0) return false;
  const ChordalCover cover = chordal_triangulation(model);
  const ReducedSystem sys = build_reduced_system(table, model, cover);
  return is_linear_space(sys);
}

void write_lp_text(const ReducedSystem& sys, std::ostream& out) {
  auto var_name = [&](std::size_t block, std::size_t offset) {
    const auto& b = sys.blocks[block];
    std::size_t g = 0;
    while (g + 1 < b.face_offset.size() && b.face_offset[g + 1] <= offset) ++g;
    std::string face = "e";  // empty face
    if (!b.faces[g].empty()) {
      face.clear();
      for (int v : b.faces[g]) face += std::to_string(v);
    }
    return "c" + std::to_string(block + 1) + "_" + face + "_" +
           std::to_string(offset - b.face_offset[g] + 1);
  };

  out << "\\ reduced certificate system: " << sys.total_inequalities
      << " inequalities, " << sys.total_vars << " variables\n";
  out << "Maximize\n obj: 0\nSubject To\n";
  std::size_t rid = 0;
  for (std::size_t b = 0; b < sys.blocks.size(); ++b)
    for (const auto& ineq : sys.blocks[b].inequalities) {
      out << " ineq" << ++rid << ":";
      bool any = false;
      for (std::size_t j = 0; j < ineq.size(); ++j) {
        if (ineq[j] == 0) continue;
        out << (ineq[j] > 0 ? " + " : " - ")
            << (std::abs(ineq[j]) == 1 ? "" : std::to_string(std::abs(ineq[j])) + " ")
            << var_name(b, j);
        any = true;
      }
      if (!any) out << " 0 " << var_name(b, 0);
      out << " <= 0\n";
    }
  std::size_t eid = 0;
  for (const auto& eq : sys.equations)
    for (std::size_t cell = 0; cell < eq.cells; ++cell) {
      out << " eq" << ++eid << ":";
      for (std::size_t k = 0; k < eq.terms.size(); ++k)
        out << (k == 0 ? " " : " + ")
            << var_name(eq.terms[k].first, eq.terms[k].second + cell);
      out << " = 0\n";
    }
  out << "Bounds\n";
  for (std::size_t b = 0; b < sys.blocks.size(); ++b)
    for (std::size_t v = 0; v < sys.blocks[b].var_count; ++v)
      out << " " << var_name(b, v) << " free\n";
  out << "End\n";
}

}  // namespace mlecone
