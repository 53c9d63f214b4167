#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlecone/simplicial_complex.hpp"

namespace mlecone {

/// Per-variable level counts d = (d1,...,dK).
struct LevelSpec {
  std::vector<int> levels;

  int k() const { return static_cast<int>(levels.size()); }
  bool operator==(const LevelSpec&) const = default;
};

/// Validates levels and the cell-count range. Levels of 1 are rejected
/// unless `allow_unit` (collapsing paths use them).
LevelSpec make_level_spec(std::vector<int> levels, bool allow_unit = false);

std::size_t cell_count(const LevelSpec& spec);

/// Row-major rank of a 1-based multi-index, last coordinate fastest.
std::size_t linear_index(const std::vector<int>& cell, const LevelSpec& spec);

/// Inverse of linear_index.
std::vector<int> cell_of_index(std::size_t index, const LevelSpec& spec);

/// Nonnegative integer counts over the cell grid, flat in row-major order.
struct ContingencyTable {
  LevelSpec spec;
  std::vector<long long> counts;

  long long total() const;
};

ContingencyTable make_table(LevelSpec spec, std::vector<long long> counts);

/// Sum of counts over all cells whose restriction to `face` matches each
/// face cell; face = {} yields the 1-cell grand total.
ContingencyTable margin(const ContingencyTable& table,
                        const std::vector<int>& face);

/// The margin blocks t = A n, one block per facet (or per face in
/// AllFaces mode), concatenated in design-matrix row order.
struct MarginVector {
  std::vector<std::vector<int>> block_faces;
  std::vector<std::vector<long long>> blocks;

  std::vector<long long> flat() const;
};

MarginVector margins_vector(const ContingencyTable& table,
                            const SimplicialComplex& model,
                            FaceMode mode = FaceMode::FacetsOnly);

// I/O. JSON: {"levels":[...], "counts":[...]} in row-major order.
// CSV: one "i1,...,iK,count" line per cell, missing cells read as 0;
// levels default to the per-coordinate maxima seen.
ContingencyTable table_from_json(const nlohmann::json& j);
nlohmann::json table_to_json(const ContingencyTable& table);
ContingencyTable read_table_file(const std::string& path,
                                 const std::vector<int>& level_override = {});
ContingencyTable parse_table_csv(std::istream& in,
                                 const std::vector<int>& level_override = {});

}  // namespace mlecone
