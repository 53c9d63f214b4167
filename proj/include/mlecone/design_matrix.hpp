#pragma once

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "mlecone/table.hpp"

namespace mlecone {

/// The 0/1 matrix A whose rows are indicator functions of (face, face-cell)
/// fibers and whose columns are cells. Rows are grouped by face in canonical
/// order (facet lex order, or (size, lex) over all faces including the empty
/// face), each group in row-major face-cell order.
struct DesignMatrix {
  FaceMode mode = FaceMode::FacetsOnly;
  LevelSpec spec;
  std::vector<std::vector<int>> row_faces;   // face of each row group
  std::vector<std::size_t> group_offset;     // first row of each group
  std::size_t row_count = 0;
  std::size_t col_count = 0;
  std::vector<std::vector<std::uint32_t>> rows;  // sorted column indices

  /// Row indices of the ones in a column: one per face group.
  std::vector<std::uint32_t> column(std::size_t cell_index) const;
};

DesignMatrix build_design_matrix(const LevelSpec& spec,
                                 const SimplicialComplex& model,
                                 FaceMode mode = FaceMode::FacetsOnly);

/// Exact rank over the rationals (fraction-free elimination) and
/// kernel dimension col_count - rank.
std::pair<int, int> rank_and_kernel_dim(const DesignMatrix& a);

/// "rows cols nnz" header then one "r c" line per entry (all entries are 1).
void write_sparse_text(const DesignMatrix& a, std::ostream& out);

}  // namespace mlecone
