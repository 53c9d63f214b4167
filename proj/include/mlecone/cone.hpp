#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlecone/design_matrix.hpp"
#include "mlecone/rational.hpp"

namespace mlecone {

/// Resource caps for facet enumeration. Cells beyond 128 are a hard limit
/// of the incidence representation.
struct ConeBudget {
  std::size_t max_rays = 100;
  std::size_t max_ambient_dim = 50;
};

/// Incidence set over at most 128 generators.
struct Bits128 {
  std::array<std::uint64_t, 2> w{0, 0};

  void set(std::size_t i) { w[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const {
    return (w[i >> 6] >> (i & 63)) & 1;
  }
  int count() const {
    return __builtin_popcountll(w[0]) + __builtin_popcountll(w[1]);
  }
  Bits128 operator&(const Bits128& o) const {
    return Bits128{{w[0] & o.w[0], w[1] & o.w[1]}};
  }
  bool contains(const Bits128& sub) const {
    return (sub.w[0] & ~w[0]) == 0 && (sub.w[1] & ~w[1]) == 0;
  }
  bool operator==(const Bits128&) const = default;
};

/// Facet inequality of a marginal cone: inward-nonpositive primitive normal
/// and the set of tight extreme rays (cells).
struct FacetInfo {
  ZVec normal;   // ambient coordinates, f . a_i <= 0 for all rays
  Bits128 tight; // cells with f . a_i == 0
};

/// Full dual description of the marginal cone of (spec, model): extreme
/// rays (the design-matrix columns, one per cell), irredundant facet list,
/// and a basis of the linear hull's orthogonal complement.
struct ConeDescription {
  LevelSpec spec;
  SimplicialComplex model;
  std::size_t ambient_dim = 0;
  int dim = 0;
  std::vector<ZVec> extreme_rays;
  std::vector<FacetInfo> facets;
  std::vector<QVec> hull_equations;
};

/// 0/* incidence pattern of a facet, row-major over cells: '*' where the
/// cell's ray lies on the facet, '0' where the inequality is strict.
struct ZeroStarPattern {
  LevelSpec spec;
  std::string marks;

  bool star(std::size_t cell) const { return marks[cell] == '*'; }
};

struct FacetOrbit {
  std::string canonical;              // lex-min member pattern ('*' < '0')
  std::vector<std::size_t> members;   // facet indices, ascending

  std::size_t size() const { return members.size(); }
};

/// Per-variable surjections merging levels; the identity on a variable is
/// a map onto itself.
struct CollapsingMap {
  std::vector<std::vector<int>> level_map;  // [var][source level-1] = target level

  std::vector<int> target_levels() const;
};

/// Double description run over exact integers: facets of cone(generators)
/// in R^dim. Generators must span R^dim and generate a pointed cone.
struct ReducedCone {
  int dim = 0;
  std::vector<ZVec> normals;        // primitive, y . g_i <= 0
  std::vector<Bits128> tight;       // generator incidence per normal
};
ReducedCone dd_facets(const std::vector<ZVec>& generators, int dim);

/// Facet enumeration of the marginal cone by incremental double
/// description (ray insertion by cell index; adjacency via the rank of the
/// common tight set). Throws BudgetError when the cone exceeds the budget.
ConeDescription enumerate_facets(const LevelSpec& spec,
                                 const SimplicialComplex& model,
                                 const ConeBudget& budget = {});

ZeroStarPattern pattern_of(const ConeDescription& cone,
                           std::size_t facet_index);

/// Orbits of facet patterns under independent level permutations of each
/// variable (S_{d1} x ... x S_{dK}), via closure under adjacent
/// transpositions. Sorted by canonical pattern.
std::vector<FacetOrbit> orbit_classify(const ConeDescription& cone);

ContingencyTable collapse_table(const ContingencyTable& table,
                                const CollapsingMap& map);

/// Pullback of a collapsed-cone facet pattern: star exactly on cells whose
/// image is starred. is_facet iff the incident rays span a hyperplane of
/// the original cone's linear hull.
struct LiftedFace {
  ZeroStarPattern pattern;
  bool is_facet = false;
};
LiftedFace lift_facet(const LevelSpec& spec, const SimplicialComplex& model,
                      const CollapsingMap& map,
                      const ZeroStarPattern& collapsed_pattern);

/// Pushdown of a pattern along a collapsing: defined when the pattern is
/// constant on every fiber.
std::optional<ZeroStarPattern> pattern_pushdown(const ZeroStarPattern& pattern,
                                                const CollapsingMap& map);

/// All per-variable merge maps from `levels` onto `target` (componentwise
/// partitions into labeled blocks in first-appearance order).
std::vector<CollapsingMap> collapsing_maps(const std::vector<int>& levels,
                                           const std::vector<int>& target);

/// Memoizes enumerated cones across collapsibility candidates.
class ConeCache {
 public:
  const ConeDescription& get(const LevelSpec& spec,
                             const SimplicialComplex& model,
                             const ConeBudget& budget);

 private:
  std::map<std::string, ConeDescription> cones_;
};

/// Facet provenance for three-way no-three-factor cones (Table-style
/// collapsing analysis).
struct OrbitProvenance {
  enum class Kind { MarginFacet, CollapsedFrom, NonCollapsible };
  std::string pattern;
  std::size_t orbit_size = 0;
  Kind kind = Kind::NonCollapsible;
  std::vector<int> from_levels;  // set for CollapsedFrom
};

struct CollapseReport {
  LevelSpec spec;
  std::vector<OrbitProvenance> orbits;
  std::vector<int> smallest_target;  // least (p',q',r') covering all orbits
  bool conjecture_applicable = false;  // sorted levels have r > q
  bool conjecture_holds = true;        // all facets collapse to (p,q,q)
};

CollapseReport collapsibility_report(const LevelSpec& spec, ConeCache& cache,
                                     const ConeBudget& budget = {});

/// 0.5 (2^p-2)(2^q-2)(2^r-2) + pq + qr + pr.
long long facet_count_lower_bound(int p, int q, int r);

/// (2^q-2)(2^r-2) + 2(q+r) + qr: the exact facet count for p = 2.
long long facet_count_2qr(int q, int r);

/// Ground-truth relint membership from the facet list: the MLE exists iff
/// no facet inequality is tight at the margin vector.
bool boundary_oracle(const ConeDescription& cone, const ContingencyTable& table);
bool boundary_oracle(const ContingencyTable& table,
                     const SimplicialComplex& model,
                     const ConeBudget& budget = {});

nlohmann::json cone_to_json(const ConeDescription& cone);

}  // namespace mlecone
