#include "mlecone/cone.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "mlecone/linalg.hpp"

namespace mlecone {

namespace {

Integer dot(const ZVec& a, const ZVec& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// Greedy first linearly independent subset of the given vectors, in order.
std::vector<std::size_t> independent_subset(const std::vector<ZVec>& vecs,
                                            int dim) {
  std::vector<std::size_t> picked;
  std::vector<ZVec> rows;
  for (std::size_t i = 0; i < vecs.size() && static_cast<int>(picked.size()) < dim;
       ++i) {
    rows.push_back(vecs[i]);
    if (exact_rank_big(rows) == static_cast<int>(rows.size()))
      picked.push_back(i);
    else
      rows.pop_back();
  }
  return picked;
}

// Rank of the vectors selected by `which`, via the 64-bit fast path when
// entries allow it.
int rank_of_selection(const std::vector<ZVec>& vecs, const Bits128& which,
                      bool small_entries) {
  if (small_entries) {
    std::vector<std::vector<long long>> rows;
    for (std::size_t i = 0; i < vecs.size(); ++i)
      if (which.test(i)) {
        std::vector<long long> r(vecs[i].size());
        for (std::size_t j = 0; j < r.size(); ++j) r[j] = vecs[i][j].get_si();
        rows.push_back(std::move(r));
      }
    return exact_rank(rows);
  }
  std::vector<ZVec> rows;
  for (std::size_t i = 0; i < vecs.size(); ++i)
    if (which.test(i)) rows.push_back(vecs[i]);
  return exact_rank_big(rows);
}

bool all_entries_fit_64(const std::vector<ZVec>& vecs) {
  for (const auto& v : vecs)
    for (const auto& x : v)
      if (!x.fits_slong_p()) return false;
  return true;
}

// Facet normals of the simplicial cone over the selected generators:
// rows of -(M^-1) where M has the selected generators as columns.
std::vector<ZVec> simplex_normals(const std::vector<ZVec>& gens,
                                  const std::vector<std::size_t>& sel) {
  const std::size_t d = sel.size();
  std::vector<QVec> aug(d, QVec(2 * d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug[i][j] = gens[sel[j]][i];
    aug[i][d + i] = 1;
  }
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    while (piv < d && aug[piv][col] == 0) ++piv;
    if (piv == d) throw std::logic_error("selected generators not independent");
    std::swap(aug[piv], aug[col]);
    Rational p = aug[col][col];
    for (auto& x : aug[col]) x /= p;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == col || aug[i][col] == 0) continue;
      Rational f = aug[i][col];
      for (std::size_t j = 0; j < 2 * d; ++j) aug[i][j] -= f * aug[col][j];
    }
  }
  std::vector<ZVec> normals(d, ZVec(d));
  for (std::size_t k = 0; k < d; ++k) {
    Integer lcm = 1;
    for (std::size_t j = 0; j < d; ++j) {
      Rational q = -aug[k][d + j];  // row k of -(M^-1)
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(),
              q.get_den().get_mpz_t());
    }
    for (std::size_t j = 0; j < d; ++j) {
      Rational q = -aug[k][d + j] * Rational(lcm);
      normals[k][j] = q.get_num();
    }
    normalize_primitive(normals[k]);
  }
  return normals;
}

}  // namespace

ReducedCone dd_facets(const std::vector<ZVec>& gens, int dim) {
  const std::size_t n = gens.size();
  if (n > 128) throw BudgetError("more than 128 generators");
  const bool small = all_entries_fit_64(gens);

  const std::vector<std::size_t> sel = independent_subset(gens, dim);
  if (static_cast<int>(sel.size()) != dim)
    throw std::logic_error("generators do not span the stated dimension");

  struct F {
    ZVec y;
    Bits128 tight;
  };
  std::vector<F> facets;
  {
    std::vector<ZVec> init = simplex_normals(gens, sel);
    for (std::size_t k = 0; k < sel.size(); ++k) {
      F f{std::move(init[k]), {}};
      for (std::size_t j = 0; j < sel.size(); ++j)
        if (j != k) f.tight.set(sel[j]);
      facets.push_back(std::move(f));
    }
  }

  std::vector<bool> inserted(n, false);
  for (std::size_t i : sel) inserted[i] = true;

  std::vector<Integer> val;
  for (std::size_t i = 0; i < n; ++i) {
    if (inserted[i]) continue;
    inserted[i] = true;
    val.assign(facets.size(), Integer(0));
    bool any_drop = false;
    for (std::size_t f = 0; f < facets.size(); ++f) {
      val[f] = dot(facets[f].y, gens[i]);
      if (val[f] > 0) any_drop = true;
    }
    if (!any_drop) {
      for (std::size_t f = 0; f < facets.size(); ++f)
        if (val[f] == 0) facets[f].tight.set(i);
      continue;
    }

    std::vector<std::size_t> keep, drop;
    for (std::size_t f = 0; f < facets.size(); ++f)
      (val[f] > 0 ? drop : keep).push_back(f);

    std::vector<F> fresh;
    for (std::size_t k : keep) {
      if (val[k] == 0) continue;
      for (std::size_t d : drop) {
        Bits128 common = facets[k].tight & facets[d].tight;
        if (common.count() < dim - 2) continue;
        bool adjacent = true;
        for (std::size_t g = 0; g < facets.size() && adjacent; ++g) {
          if (g == k || g == d) continue;
          if (facets[g].tight.contains(common)) adjacent = false;
        }
        if (!adjacent) continue;
        if (rank_of_selection(gens, common, small) != dim - 2) continue;

        F nf;
        nf.y.resize(facets[k].y.size());
        for (std::size_t j = 0; j < nf.y.size(); ++j)
          nf.y[j] = val[d] * facets[k].y[j] - val[k] * facets[d].y[j];
        normalize_primitive(nf.y);
        nf.tight = common;
        nf.tight.set(i);
        fresh.push_back(std::move(nf));
      }
    }

    std::vector<F> next;
    next.reserve(keep.size() + fresh.size());
    for (std::size_t k : keep) {
      F f = std::move(facets[k]);
      if (val[k] == 0) f.tight.set(i);
      next.push_back(std::move(f));
    }
    for (auto& f : fresh) next.push_back(std::move(f));
    facets = std::move(next);
  }

  ReducedCone out;
  out.dim = dim;
  for (auto& f : facets) {
    out.normals.push_back(std::move(f.y));
    out.tight.push_back(f.tight);
  }
  return out;
}

ConeDescription enumerate_facets(const LevelSpec& spec,
                                 const SimplicialComplex& model,
                                 const ConeBudget& budget) {
  const DesignMatrix a = build_design_matrix(spec, model);
  if (a.col_count > budget.max_rays)
    throw BudgetError("cone has " + std::to_string(a.col_count) +
                      " extreme rays, budget is " +
                      std::to_string(budget.max_rays));
  if (a.row_count > budget.max_ambient_dim)
    throw BudgetError("ambient dimension " + std::to_string(a.row_count) +
                      " exceeds budget " + std::to_string(budget.max_ambient_dim));
  if (a.col_count > 128) throw BudgetError("more than 128 cells");

  ConeDescription cone;
  cone.spec = spec;
  cone.model = model;
  cone.ambient_dim = a.row_count;

  cone.extreme_rays.assign(a.col_count, ZVec(a.row_count, Integer(0)));
  for (std::size_t i = 0; i < a.col_count; ++i)
    for (std::uint32_t r : a.column(i)) cone.extreme_rays[i][r] = 1;

  const auto [rank, kernel] = rank_and_kernel_dim(a);
  (void)kernel;
  cone.dim = rank;

  // Reduce to the span of the rays: coordinates y with ambient = B y, where
  // B's columns are the first `rank` independent ray columns.
  const std::vector<std::size_t> basis_cols =
      independent_subset(cone.extreme_rays, rank);
  std::vector<ZVec> reduced(a.col_count, ZVec(rank));
  for (std::size_t i = 0; i < a.col_count; ++i)
    for (int k = 0; k < rank; ++k)
      reduced[i][k] = dot(cone.extreme_rays[basis_cols[k]], cone.extreme_rays[i]);

  ReducedCone rc = dd_facets(reduced, rank);

  for (std::size_t f = 0; f < rc.normals.size(); ++f) {
    FacetInfo info;
    info.normal.assign(a.row_count, Integer(0));
    for (int k = 0; k < rank; ++k) {
      if (rc.normals[f][k] == 0) continue;
      const ZVec& bk = cone.extreme_rays[basis_cols[k]];
      for (std::size_t r = 0; r < a.row_count; ++r)
        if (bk[r] != 0) info.normal[r] += rc.normals[f][k] * bk[r];
    }
    normalize_primitive(info.normal);
    info.tight = rc.tight[f];
    cone.facets.push_back(std::move(info));
  }

  // Validity sweep: every ray satisfies every facet, tight exactly as marked,
  // and each facet's tight rays span a hyperplane of the cone's hull.
  for (const auto& f : cone.facets) {
    for (std::size_t i = 0; i < a.col_count; ++i) {
      Integer s = dot(f.normal, cone.extreme_rays[i]);
      if (s > 0 || (s == 0) != f.tight.test(i))
        throw std::logic_error("facet validity check failed");
    }
    if (rank_of_selection(cone.extreme_rays, f.tight, true) != rank - 1)
      throw std::logic_error("facet rank check failed");
  }

  {  // hull equations: kernel of the matrix whose rows are the rays
    std::vector<QVec> rows(a.col_count, QVec(a.row_count, Rational(0)));
    for (std::size_t i = 0; i < a.col_count; ++i)
      for (std::uint32_t r : a.column(i)) rows[i][r] = 1;
    cone.hull_equations = kernel_basis(std::move(rows));
  }

  // Deterministic facet order: by pattern, stars first.
  std::vector<std::size_t> order(cone.facets.size());
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](std::size_t f) {
    std::string s(a.col_count, '0');
    for (std::size_t i = 0; i < a.col_count; ++i)
      if (cone.facets[f].tight.test(i)) s[i] = '*';
    return s;
  };
  std::vector<std::string> keys(cone.facets.size());
  for (std::size_t f = 0; f < keys.size(); ++f) keys[f] = key(f);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return keys[x] < keys[y];
  });
  std::vector<FacetInfo> sorted;
  sorted.reserve(cone.facets.size());
  for (std::size_t f : order) sorted.push_back(std::move(cone.facets[f]));
  cone.facets = std::move(sorted);
  return cone;
}

ZeroStarPattern pattern_of(const ConeDescription& cone,
                           std::size_t facet_index) {
  const std::size_t n = cone.extreme_rays.size();
  ZeroStarPattern p{cone.spec, std::string(n, '0')};
  for (std::size_t i = 0; i < n; ++i)
    if (cone.facets.at(facet_index).tight.test(i)) p.marks[i] = '*';
  return p;
}

namespace {

// Cell permutation induced by swapping levels l and l+1 of variable v.
std::vector<std::size_t> level_swap_perm(const LevelSpec& spec, int var,
                                         int level) {
  const std::size_t n = cell_count(spec);
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<int> cell = cell_of_index(i, spec);
    if (cell[var] == level)
      cell[var] = level + 1;
    else if (cell[var] == level + 1)
      cell[var] = level;
    perm[i] = linear_index(cell, spec);
  }
  return perm;
}

std::string apply_perm(const std::string& marks,
                       const std::vector<std::size_t>& perm) {
  std::string out(marks.size(), '0');
  for (std::size_t i = 0; i < marks.size(); ++i) out[perm[i]] = marks[i];
  return out;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<FacetOrbit> orbit_classify(const ConeDescription& cone) {
  const std::size_t nf = cone.facets.size();
  std::vector<std::string> pat(nf);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t f = 0; f < nf; ++f) {
    pat[f] = pattern_of(cone, f).marks;
    index.emplace(pat[f], f);
  }

  UnionFind uf(nf);
  for (int var = 0; var < cone.spec.k(); ++var) {
    for (int level = 1; level < cone.spec.levels[var]; ++level) {
      const auto perm = level_swap_perm(cone.spec, var, level);
      for (std::size_t f = 0; f < nf; ++f) {
        auto it = index.find(apply_perm(pat[f], perm));
        if (it == index.end())
          throw std::logic_error("facet image under level swap is not a facet");
        uf.unite(f, it->second);
      }
    }
  }

  std::map<std::size_t, FacetOrbit> groups;
  for (std::size_t f = 0; f < nf; ++f) {
    FacetOrbit& o = groups[uf.find(f)];
    o.members.push_back(f);
    if (o.canonical.empty() || pat[f] < o.canonical) o.canonical = pat[f];
  }
  std::vector<FacetOrbit> out;
  for (auto& [root, orbit] : groups) out.push_back(std::move(orbit));
  std::sort(out.begin(), out.end(), [](const FacetOrbit& a, const FacetOrbit& b) {
    return a.canonical < b.canonical;
  });
  return out;
}

std::vector<int> CollapsingMap::target_levels() const {
  std::vector<int> out;
  for (const auto& m : level_map)
    out.push_back(*std::max_element(m.begin(), m.end()));
  return out;
}

namespace {

void validate_map(const CollapsingMap& map, const LevelSpec& spec) {
  if (static_cast<int>(map.level_map.size()) != spec.k())
    throw DimensionError("collapsing map arity mismatch");
  for (int v = 0; v < spec.k(); ++v) {
    const auto& m = map.level_map[v];
    if (static_cast<int>(m.size()) != spec.levels[v])
      throw DimensionError("collapsing map level count mismatch");
    int target = *std::max_element(m.begin(), m.end());
    std::vector<bool> hit(target, false);
    for (int t : m) {
      if (t < 1 || t > target) throw DimensionError("bad collapsing target level");
      hit[t - 1] = true;
    }
    for (bool h : hit)
      if (!h) throw DimensionError("collapsing map is not surjective");
  }
}

std::size_t map_cell(const CollapsingMap& map, const LevelSpec& src,
                     const LevelSpec& dst, std::size_t cell) {
  std::vector<int> c = cell_of_index(cell, src);
  for (std::size_t v = 0; v < c.size(); ++v)
    c[v] = map.level_map[v][c[v] - 1];
  return linear_index(c, dst);
}

}  // namespace

ContingencyTable collapse_table(const ContingencyTable& table,
                                const CollapsingMap& map) {
  validate_map(map, table.spec);
  LevelSpec target = make_level_spec(map.target_levels(), true);
  std::vector<long long> counts(cell_count(target), 0);
  for (std::size_t i = 0; i < table.counts.size(); ++i) {
    std::size_t j = map_cell(map, table.spec, target, i);
    long long r;
    if (__builtin_add_overflow(counts[j], table.counts[i], &r))
      throw std::overflow_error("collapsed count overflows 64 bits");
    counts[j] = r;
  }
  return make_table(std::move(target), std::move(counts));
}

std::optional<ZeroStarPattern> pattern_pushdown(const ZeroStarPattern& pattern,
                                                const CollapsingMap& map) {
  validate_map(map, pattern.spec);
  LevelSpec target = make_level_spec(map.target_levels(), true);
  std::string marks(cell_count(target), '?');
  for (std::size_t i = 0; i < pattern.marks.size(); ++i) {
    std::size_t j = map_cell(map, pattern.spec, target, i);
    if (marks[j] == '?')
      marks[j] = pattern.marks[i];
    else if (marks[j] != pattern.marks[i])
      return std::nullopt;  // not constant on a fiber
  }
  return ZeroStarPattern{std::move(target), std::move(marks)};
}

LiftedFace lift_facet(const LevelSpec& spec, const SimplicialComplex& model,
                      const CollapsingMap& map,
                      const ZeroStarPattern& collapsed_pattern) {
  validate_map(map, spec);
  LevelSpec target = make_level_spec(map.target_levels(), true);
  if (target.levels != collapsed_pattern.spec.levels)
    throw DimensionError("pattern does not live on the collapsing target");

  const std::size_t n = cell_count(spec);
  LiftedFace out;
  out.pattern = ZeroStarPattern{spec, std::string(n, '0')};
  const DesignMatrix a = build_design_matrix(spec, model);
  std::vector<std::vector<long long>> incident;
  for (std::size_t i = 0; i < n; ++i) {
    if (!collapsed_pattern.star(map_cell(map, spec, target, i))) continue;
    out.pattern.marks[i] = '*';
    std::vector<long long> ray(a.row_count, 0);
    for (std::uint32_t r : a.column(i)) ray[r] = 1;
    incident.push_back(std::move(ray));
  }
  const int dim = rank_and_kernel_dim(a).first;
  out.is_facet = exact_rank(incident) == dim - 1;
  return out;
}

namespace {

// Surjections [d] -> [m] as set partitions with blocks labeled in
// first-appearance order.
void gen_partitions(int d, int m, int pos, int used, std::vector<int>& cur,
                    std::vector<std::vector<int>>& out) {
  if (pos == d) {
    if (used == m) out.push_back(cur);
    return;
  }
  if (d - pos < m - used) return;  // cannot reach m blocks
  for (int b = 1; b <= std::min(used + 1, m); ++b) {
    cur[pos] = b;
    gen_partitions(d, m, pos + 1, b == used + 1 ? used + 1 : used, cur, out);
  }
}

std::vector<std::vector<int>> partitions_onto(int d, int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d);
  gen_partitions(d, m, 0, 0, cur, out);
  return out;
}

}  // namespace

std::vector<CollapsingMap> collapsing_maps(const std::vector<int>& levels,
                                           const std::vector<int>& target) {
  if (levels.size() != target.size())
    throw DimensionError("collapsing target arity mismatch");
  std::vector<std::vector<std::vector<int>>> per_var;
  for (std::size_t v = 0; v < levels.size(); ++v) {
    if (target[v] > levels[v] || target[v] < 1)
      throw DimensionError("collapsing target exceeds source levels");
    per_var.push_back(partitions_onto(levels[v], target[v]));
  }
  std::vector<CollapsingMap> out;
  std::vector<std::size_t> pick(levels.size(), 0);
  for (;;) {
    CollapsingMap m;
    for (std::size_t v = 0; v < levels.size(); ++v)
      m.level_map.push_back(per_var[v][pick[v]]);
    out.push_back(std::move(m));
    std::size_t v = levels.size();
    while (v-- > 0) {
      if (++pick[v] < per_var[v].size()) break;
      pick[v] = 0;
      if (v == 0) return out;
    }
  }
}

const ConeDescription& ConeCache::get(const LevelSpec& spec,
                                      const SimplicialComplex& model,
                                      const ConeBudget& budget) {
  std::string key = format_complex(model);
  for (int d : spec.levels) key += ":" + std::to_string(d);
  auto it = cones_.find(key);
  if (it == cones_.end())
    it = cones_.emplace(key, enumerate_facets(spec, model, budget)).first;
  return it->second;
}

namespace {

// Zero set equals one (face, face-cell) fiber of a model facet.
bool is_margin_facet(const ZeroStarPattern& pattern,
                     const SimplicialComplex& model) {
  const std::size_t n = pattern.marks.size();
  for (const auto& face : model.facets) {
    std::map<std::size_t, std::vector<std::size_t>> fibers;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<int> cell = cell_of_index(i, pattern.spec);
      std::size_t sub = 0;
      for (int v : face)
        sub = sub * static_cast<std::size_t>(pattern.spec.levels[v - 1]) +
              static_cast<std::size_t>(cell[v - 1] - 1);
      fibers[sub].push_back(i);
    }
    for (const auto& [sub, cells] : fibers) {
      std::size_t zero_count = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (!pattern.star(i)) ++zero_count;
      if (zero_count != cells.size()) continue;
      bool match = true;
      for (std::size_t i : cells)
        if (pattern.star(i)) { match = false; break; }
      if (match) return true;
    }
  }
  return false;
}

bool orbit_collapses_to(const ZeroStarPattern& rep,
                        const std::vector<int>& target,
                        const std::unordered_set<std::string>& target_patterns) {
  for (const auto& map : collapsing_maps(rep.spec.levels, target)) {
    auto down = pattern_pushdown(rep, map);
    if (down && target_patterns.count(down->marks)) return true;
  }
  return false;
}

}  // namespace

CollapseReport collapsibility_report(const LevelSpec& spec, ConeCache& cache,
                                     const ConeBudget& budget) {
  if (spec.k() != 3)
    throw DimensionError("collapsibility analysis is defined for 3-way tables");
  const SimplicialComplex model = no_three_factor();
  const ConeDescription& cone = cache.get(spec, model, budget);
  const auto orbits = orbit_classify(cone);

  // Candidate targets, smallest first.
  std::vector<std::vector<int>> targets;
  for (int p = 2; p <= spec.levels[0]; ++p)
    for (int q = 2; q <= spec.levels[1]; ++q)
      for (int r = 2; r <= spec.levels[2]; ++r) targets.push_back({p, q, r});
  std::sort(targets.begin(), targets.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              long long pa = 1, pb = 1;
              for (int x : a) pa *= x;
              for (int x : b) pb *= x;
              return pa != pb ? pa < pb : a < b;
            });

  std::unordered_map<std::string, std::unordered_set<std::string>> pattern_sets;
  auto patterns_of_target = [&](const std::vector<int>& t)
      -> const std::unordered_set<std::string>& {
    std::string key;
    for (int d : t) key += std::to_string(d) + ",";
    auto it = pattern_sets.find(key);
    if (it == pattern_sets.end()) {
      const ConeDescription& c = cache.get(make_level_spec(t), model, budget);
      std::unordered_set<std::string> set;
      for (std::size_t f = 0; f < c.facets.size(); ++f)
        set.insert(pattern_of(c, f).marks);
      it = pattern_sets.emplace(key, std::move(set)).first;
    }
    return it->second;
  };

  CollapseReport report;
  report.spec = spec;
  for (const auto& orbit : orbits) {
    OrbitProvenance prov;
    prov.pattern = orbit.canonical;
    prov.orbit_size = orbit.size();
    ZeroStarPattern rep{spec, orbit.canonical};
    if (is_margin_facet(rep, model)) {
      prov.kind = OrbitProvenance::Kind::MarginFacet;
    } else {
      prov.kind = OrbitProvenance::Kind::NonCollapsible;
      for (const auto& t : targets) {
        if (t == spec.levels) continue;
        if (orbit_collapses_to(rep, t, patterns_of_target(t))) {
          prov.kind = OrbitProvenance::Kind::CollapsedFrom;
          prov.from_levels = t;
          break;
        }
      }
    }
    report.orbits.push_back(std::move(prov));
  }

  // Smallest single target covering every orbit (identity always works).
  for (const auto& t : targets) {
    bool all = true;
    for (const auto& orbit : orbits) {
      ZeroStarPattern rep{spec, orbit.canonical};
      if (t == spec.levels) continue;  // identity; trivially collapses
      if (!orbit_collapses_to(rep, t, patterns_of_target(t))) {
        all = false;
        break;
      }
    }
    if (all) {
      report.smallest_target = t;
      break;
    }
  }

  // Conjecture: with sorted levels p <= q <= r and r > q, everything
  // collapses to (p, q, q).
  std::vector<int> sorted = spec.levels;
  std::vector<int> pos(3);
  std::iota(pos.begin(), pos.end(), 0);
  std::sort(pos.begin(), pos.end(),
            [&](int a, int b) { return spec.levels[a] < spec.levels[b]; });
  std::sort(sorted.begin(), sorted.end());
  report.conjecture_applicable = sorted[2] > sorted[1];
  if (report.conjecture_applicable) {
    std::vector<int> target(3);
    target[pos[0]] = sorted[0];
    target[pos[1]] = sorted[1];
    target[pos[2]] = sorted[1];
    report.conjecture_holds = true;
    for (const auto& orbit : orbits) {
      ZeroStarPattern rep{spec, orbit.canonical};
      if (!orbit_collapses_to(rep, target, patterns_of_target(target))) {
        report.conjecture_holds = false;
        break;
      }
    }
  }
  return report;
}

long long facet_count_lower_bound(int p, int q, int r) {
  if (p < 2 || q < 2 || r < 2)
    throw DimensionError("levels must be at least 2");
  long long a = (1LL << p) - 2, b = (1LL << q) - 2, c = (1LL << r) - 2;
  return a * b * c / 2 + static_cast<long long>(p) * q +
         static_cast<long long>(q) * r + static_cast<long long>(p) * r;
}

long long facet_count_2qr(int q, int r) {
  if (q < 2 || r < 2) throw DimensionError("levels must be at least 2");
  long long b = (1LL << q) - 2, c = (1LL << r) - 2;
  return b * c + 2LL * (q + r) + static_cast<long long>(q) * r;
}

bool boundary_oracle(const ConeDescription& cone,
                     const ContingencyTable& table) {
  if (table.spec.levels != cone.spec.levels)
    throw DimensionError("table does not match the cone's level spec");
  const auto flat = margins_vector(table, cone.model).flat();
  ZVec t(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) t[i] = to_integer(flat[i]);
  for (const auto& f : cone.facets) {
    Integer s = dot(f.normal, t);
    if (s > 0) throw std::logic_error("margin vector outside its own cone");
    if (s == 0) return false;
  }
  return true;
}

bool boundary_oracle(const ContingencyTable& table,
                     const SimplicialComplex& model, const ConeBudget& budget) {
  return boundary_oracle(enumerate_facets(table.spec, model, budget), table);
}

nlohmann::json cone_to_json(const ConeDescription& cone) {
  nlohmann::json j;
  j["spec"] = cone.spec.levels;
  j["model"] = format_complex(cone.model);
  j["ambient_dim"] = cone.ambient_dim;
  j["dim"] = cone.dim;
  j["extreme_ray_count"] = cone.extreme_rays.size();
  nlohmann::json facets = nlohmann::json::array();
  for (std::size_t f = 0; f < cone.facets.size(); ++f) {
    nlohmann::json entry;
    nlohmann::json normal = nlohmann::json::array();
    for (const auto& x : cone.facets[f].normal) normal.push_back(x.get_str());
    entry["normal"] = std::move(normal);
    entry["pattern"] = pattern_of(cone, f).marks;
    facets.push_back(std::move(entry));
  }
  j["facets"] = std::move(facets);
  nlohmann::json orbits = nlohmann::json::array();
  for (const auto& o : orbit_classify(cone))
    orbits.push_back({{"pattern", o.canonical}, {"size", o.size()}});
  j["orbits"] = std::move(orbits);
  nlohmann::json hull = nlohmann::json::array();
  for (const auto& eq : cone.hull_equations) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& x : eq) row.push_back(to_string(x));
    hull.push_back(std::move(row));
  }
  j["hull_equations"] = std::move(hull);
  return j;
}

}  // namespace mlecone
