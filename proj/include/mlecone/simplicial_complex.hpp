#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlecone/rational.hpp"

namespace mlecone {

/// Which rows a design matrix (or margin vector) carries: one block per
/// inclusion-maximal facet, or one block per face including the empty face.
enum class FaceMode { FacetsOnly, AllFaces };

/// A hierarchical model: K vertices and the inclusion-maximal facets.
/// Facets are sorted ascending internally and the facet list is kept in
/// lexicographic order with non-maximal and duplicate entries removed.
struct SimplicialComplex {
  int vertex_count = 0;
  std::vector<std::vector<int>> facets;

  bool operator==(const SimplicialComplex&) const = default;
};

/// A split of a complex into two parts meeting in the separator face.
struct Decomposition {
  SimplicialComplex left;
  std::vector<int> separator;
  SimplicialComplex right;
};

/// A decomposable complex covering the input, produced by vertex elimination.
struct ChordalCover {
  std::vector<std::vector<int>> cliques;  // maximal, lex order
  std::vector<int> elimination_order;
  int width = 0;  // max clique size - 1
};

/// Canonicalizes (sorts, dedupes, absorbs non-maximal facets) and validates.
/// When `require_cover` every vertex 1..k must appear in some facet.
SimplicialComplex make_complex(int vertex_count,
                               std::vector<std::vector<int>> facet_groups,
                               bool require_cover = true);

/// Parses bracket notation: "[12][23]" with single digits, or
/// "[1,12][12,13]" with comma-separated indices for K >= 10. K is inferred
/// as the largest vertex unless `declared_k` is given.
SimplicialComplex parse_complex(const std::string& text,
                                std::optional<int> declared_k = std::nullopt);

/// All faces including the empty face, sorted by (size, lex).
std::vector<std::vector<int>> faces(const SimplicialComplex& model);

bool is_face(const SimplicialComplex& model, const std::vector<int>& subset);

/// Searches facet bipartitions for a valid (left, separator, right) split,
/// preferring the smallest separator with lexicographic tie-breaks. Returns
/// nullopt when the complex is irreducible.
std::optional<Decomposition> find_decomposition(const SimplicialComplex& model);

/// True iff the complex is a simplex or recursively splits into
/// decomposable pieces.
bool is_decomposable(const SimplicialComplex& model);

/// Min-fill elimination on the 1-skeleton (ties: min degree, then lowest
/// vertex), with an exact subset-DP width search for K <= 12. The result is
/// decomposable and contains every face of the input; for K <= 12 its width
/// is the tree width.
ChordalCover chordal_triangulation(const SimplicialComplex& model);

nlohmann::json complex_to_json(const SimplicialComplex& model);
SimplicialComplex complex_from_json(const nlohmann::json& j);

/// Convenience: the K-cycle [12][23]...[K1] (K >= 3).
SimplicialComplex cycle_complex(int k);

/// Convenience: the no-three-factor-effect model [12][13][23].
SimplicialComplex no_three_factor();

std::string format_complex(const SimplicialComplex& model);

}  // namespace mlecone
