#include "mlecone/design_matrix.hpp"

#include <ostream>

#include "mlecone/linalg.hpp"

namespace mlecone {

std::vector<std::uint32_t> DesignMatrix::column(std::size_t cell_index) const {
  std::vector<int> cell = cell_of_index(cell_index, spec);
  std::vector<std::uint32_t> out;
  out.reserve(row_faces.size());
  for (std::size_t g = 0; g < row_faces.size(); ++g) {
    std::size_t sub = 0;
    for (int v : row_faces[g])
      sub = sub * static_cast<std::size_t>(spec.levels[v - 1]) +
            static_cast<std::size_t>(cell[v - 1] - 1);
    out.push_back(static_cast<std::uint32_t>(group_offset[g] + sub));
  }
  return out;
}

DesignMatrix build_design_matrix(const LevelSpec& spec,
                                 const SimplicialComplex& model,
                                 FaceMode mode) {
  if (spec.k() != model.vertex_count)
    throw DimensionError("level spec has " + std::to_string(spec.k()) +
                         " variables but model has " +
                         std::to_string(model.vertex_count));
  DesignMatrix a;
  a.mode = mode;
  a.spec = spec;
  a.row_faces = mode == FaceMode::FacetsOnly ? model.facets : faces(model);
  a.col_count = cell_count(spec);

  for (const auto& f : a.row_faces) {
    a.group_offset.push_back(a.row_count);
    std::size_t block = 1;
    for (int v : f) block *= static_cast<std::size_t>(spec.levels[v - 1]);
    a.row_count += block;
  }
  a.rows.assign(a.row_count, {});
  for (std::size_t i = 0; i < a.col_count; ++i)
    for (std::uint32_t r : a.column(i))
      a.rows[r].push_back(static_cast<std::uint32_t>(i));
  return a;
}

std::pair<int, int> rank_and_kernel_dim(const DesignMatrix& a) {
  std::vector<std::vector<long long>> dense(
      a.row_count, std::vector<long long>(a.col_count, 0));
  for (std::size_t r = 0; r < a.row_count; ++r)
    for (std::uint32_t c : a.rows[r]) dense[r][c] = 1;
  int rank = exact_rank(dense);
  return {rank, static_cast<int>(a.col_count) - rank};
}

void write_sparse_text(const DesignMatrix& a, std::ostream& out) {
  std::size_t nnz = 0;
  for (const auto& r : a.rows) nnz += r.size();
  out << a.row_count << ' ' << a.col_count << ' ' << nnz << '\n';
  for (std::size_t r = 0; r < a.row_count; ++r)
    for (std::uint32_t c : a.rows[r]) out << r << ' ' << c << '\n';
}

}  // namespace mlecone
