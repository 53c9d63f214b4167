#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "mlecone/cone.hpp"
#include "mlecone/linalg.hpp"
#include "test_helpers.hpp"

using namespace mlecone;
using mlecone::testing::random_table;
using mlecone::testing::table_of;

namespace {

const SimplicialComplex& n3f() {
  static const SimplicialComplex model = no_three_factor();
  return model;
}

ConeDescription cone_of(int p, int q, int r) {
  return enumerate_facets(make_level_spec({p, q, r}), n3f());
}

long long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// Zero cells of a facet pattern.
std::vector<std::size_t> zero_cells(const ZeroStarPattern& p) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.marks.size(); ++i)
    if (!p.star(i)) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("summary-table rows up to 3x3x3 are exact") {
  struct Row {
    int p, q, r, dim, rays, facets, orbits;
  };
  for (const Row& row : std::vector<Row>{{2, 2, 2, 7, 8, 16, 4},
                                         {2, 2, 3, 10, 12, 28, 4},
                                         {2, 2, 4, 13, 16, 48, 5},
                                         {2, 3, 3, 14, 18, 57, 5},
                                         {2, 3, 4, 18, 24, 110, 6},
                                         {3, 3, 3, 19, 27, 207, 8}}) {
    const auto cone = cone_of(row.p, row.q, row.r);
    CHECK(cone.dim == row.dim);
    CHECK(cone.extreme_rays.size() == static_cast<std::size_t>(row.rays));
    CHECK(cone.facets.size() == static_cast<std::size_t>(row.facets));
    CHECK(orbit_classify(cone).size() == static_cast<std::size_t>(row.orbits));
    CHECK(cone.hull_equations.size() == cone.ambient_dim - row.dim);
  }
}

TEST_CASE("2x2x2 facets split into 12 margin patterns and 4 antipodal ones") {
  const auto cone = cone_of(2, 2, 2);
  int margin_type = 0, antipodal = 0;
  for (std::size_t f = 0; f < cone.facets.size(); ++f) {
    const auto zeros = zero_cells(pattern_of(cone, f));
    REQUIRE(zeros.size() == 2);
    if (zeros[0] + zeros[1] == 7)
      ++antipodal;  // row-major antipode of i is 7-i
    else
      ++margin_type;
  }
  CHECK(margin_type == 12);
  CHECK(antipodal == 4);
}

TEST_CASE("every facet has at least dim-1 stars") {
  for (auto [p, q, r] : {std::tuple{2, 2, 2}, {2, 3, 3}, {3, 3, 3}}) {
    const auto cone = cone_of(p, q, r);
    for (std::size_t f = 0; f < cone.facets.size(); ++f) {
      const auto pat = pattern_of(cone, f);
      int stars = 0;
      for (std::size_t i = 0; i < pat.marks.size(); ++i)
        if (pat.star(i)) ++stars;
      CHECK(stars >= cone.dim - 1);
    }
  }
}

TEST_CASE("rays can be re-derived from the facets by a dual DD run") {
  for (auto [p, q, r] : {std::tuple{2, 2, 2}, {2, 2, 3}, {2, 3, 3}}) {
    const auto cone = cone_of(p, q, r);
    const int dim = cone.dim;

    // test-side reduction: basis = first `dim` independent ray columns
    std::vector<std::size_t> basis;
    {
      std::vector<ZVec> rows;
      for (std::size_t i = 0;
           i < cone.extreme_rays.size() && basis.size() < std::size_t(dim); ++i) {
        rows.push_back(cone.extreme_rays[i]);
        if (exact_rank_big(rows) == static_cast<int>(rows.size()))
          basis.push_back(i);
        else
          rows.pop_back();
      }
      REQUIRE(basis.size() == std::size_t(dim));
    }
    auto dot_z = [](const ZVec& a, const ZVec& b) {
      Integer s = 0;
      for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
      return s;
    };
    auto reduce_rational = [&](const ZVec& ambient) {
      // solve G y = B^T ambient with G the basis Gram matrix
      const int d = dim;
      std::vector<QVec> aug(d, QVec(d + 1));
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j)
          aug[i][j] = Rational(dot_z(cone.extreme_rays[basis[i]],
                                     cone.extreme_rays[basis[j]]));
        aug[i][d] = Rational(dot_z(cone.extreme_rays[basis[i]], ambient));
      }
      for (int col = 0; col < d; ++col) {
        int piv = col;
        while (aug[piv][col] == 0) ++piv;
        std::swap(aug[piv], aug[col]);
        Rational pv = aug[col][col];
        for (auto& x : aug[col]) x /= pv;
        for (int i = 0; i < d; ++i) {
          if (i == col || aug[i][col] == 0) continue;
          Rational f = aug[i][col];
          for (int j = col; j <= d; ++j) aug[i][j] -= f * aug[col][j];
        }
      }
      Integer lcm = 1;
      for (int i = 0; i < d; ++i)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(),
                aug[i][d].get_den().get_mpz_t());
      ZVec y(d);
      for (int i = 0; i < d; ++i) {
        Rational s = aug[i][d] * Rational(lcm);
        y[i] = s.get_num();
      }
      normalize_primitive(y);
      return y;
    };

    std::vector<ZVec> reduced_normals;
    for (const auto& f : cone.facets)
      reduced_normals.push_back(reduce_rational(f.normal));
    const auto dual = dd_facets(reduced_normals, dim);

    std::set<ZVec> expected;
    for (const auto& ray : cone.extreme_rays) {
      ZVec g(dim);
      for (int k = 0; k < dim; ++k)
        g[k] = dot_z(cone.extreme_rays[basis[k]], ray);
      normalize_primitive(g);
      expected.insert(g);
    }
    std::set<ZVec> got(dual.normals.begin(), dual.normals.end());
    CHECK(got == expected);
  }
}

TEST_CASE("orbit sizes sum to the facet count and divide the group order") {
  for (auto [p, q, r] : {std::tuple{2, 2, 3}, {2, 3, 3}, {3, 3, 3}}) {
    const auto cone = cone_of(p, q, r);
    const auto orbits = orbit_classify(cone);
    const long long group = factorial(p) * factorial(q) * factorial(r);
    std::size_t total = 0;
    for (const auto& o : orbits) {
      total += o.size();
      CHECK(group % static_cast<long long>(o.size()) == 0);
      // canonical representative is a member and lex-minimal
      ZeroStarPattern rep{cone.spec, o.canonical};
      bool found = false;
      for (std::size_t f : o.members) {
        const auto pat = pattern_of(cone, f);
        CHECK(o.canonical <= pat.marks);
        if (pat.marks == o.canonical) found = true;
      }
      CHECK(found);
    }
    CHECK(total == cone.facets.size());
  }
}

TEST_CASE("enumeration is deterministic") {
  const auto c1 = cone_of(2, 3, 3);
  const auto c2 = cone_of(2, 3, 3);
  REQUIRE(c1.facets.size() == c2.facets.size());
  for (std::size_t f = 0; f < c1.facets.size(); ++f) {
    CHECK(c1.facets[f].normal == c2.facets[f].normal);
    CHECK(c1.facets[f].tight == c2.facets[f].tight);
  }
}

TEST_CASE("budget violations raise explicit errors") {
  CHECK_THROWS_AS((enumerate_facets(make_level_spec({3, 5, 5}), n3f())),
                  BudgetError);  // ambient 55 > default 50
  ConeBudget tiny{4, 50};
  CHECK_THROWS_AS((enumerate_facets(make_level_spec({2, 2, 2}), n3f(), tiny)),
                  BudgetError);
}

TEST_CASE("collapse_table merges levels and commutes with margins") {
  const auto table = table_of({2, 2, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12});
  CollapsingMap fuse{{{1, 2}, {1, 2}, {1, 2, 2}}};
  const auto collapsed = collapse_table(table, fuse);
  CHECK(collapsed.spec.levels == std::vector<int>{2, 2, 2});
  // cells with third level in {2,3} merge
  CHECK(collapsed.counts ==
        std::vector<long long>{1, 5, 4, 11, 7, 17, 10, 23});

  CollapsingMap identity{{{1, 2}, {1, 2}, {1, 2, 3}}};
  CHECK(collapse_table(table, identity).counts == table.counts);

  // margin of collapse == collapse of margin (on the untouched variables)
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_table(make_level_spec({3, 2, 4}), rng, 0.3);
    CollapsingMap m{{{1, 2, 2}, {1, 2}, {1, 1, 2, 2}}};
    const auto lhs = margin(collapse_table(t, m), {1});
    // collapsing variable 1 of the {1}-margin directly
    const auto raw = margin(t, {1});
    std::vector<long long> rhs(2, 0);
    for (int lvl = 1; lvl <= 3; ++lvl)
      rhs[m.level_map[0][lvl - 1] - 1] += raw.counts[lvl - 1];
    CHECK(lhs.counts == rhs);
  }
  CHECK_THROWS_AS((collapse_table(table, CollapsingMap{{{1, 3}, {1, 2}, {1, 2, 2}}})),
                  DimensionError);  // level 2 of the target is never hit
}

TEST_CASE("the number of collapsings onto a binary spec matches the formula") {
  for (auto [p, q, r] : {std::tuple{3, 3, 3}, {3, 4, 4}, {2, 3, 4}}) {
    const auto maps = collapsing_maps({p, q, r}, {2, 2, 2});
    const long long expect = ((1LL << (p - 1)) - 1) * ((1LL << (q - 1)) - 1) *
                             ((1LL << (r - 1)) - 1);
    CHECK(static_cast<long long>(maps.size()) == expect);
  }
}

TEST_CASE("antipodal facets lift to facets under every collapsing") {
  const auto base = cone_of(2, 2, 2);
  std::vector<ZeroStarPattern> antipodal;
  for (std::size_t f = 0; f < base.facets.size(); ++f) {
    const auto pat = pattern_of(base, f);
    const auto zeros = zero_cells(pat);
    if (zeros[0] + zeros[1] == 7) antipodal.push_back(pat);
  }
  REQUIRE(antipodal.size() == 4);

  for (const auto& levels : {std::vector<int>{3, 3, 3}, {2, 3, 3}}) {
    const auto spec = make_level_spec(levels);
    std::set<std::string> lifted_patterns;
    for (const auto& map : collapsing_maps(levels, {2, 2, 2}))
      for (const auto& pat : antipodal) {
        const auto lifted = lift_facet(spec, n3f(), map, pat);
        CHECK(lifted.is_facet);
        lifted_patterns.insert(lifted.pattern.marks);
        // pushing the lift back down restores the pattern
        const auto down = pattern_pushdown(lifted.pattern, map);
        REQUIRE(down.has_value());
        CHECK(down->marks == pat.marks);
      }
    // second-type facets: 4 per collapsing, all distinct (Prop 9 count)
    const auto n_maps = collapsing_maps(levels, {2, 2, 2}).size();
    CHECK(lifted_patterns.size() == 4 * n_maps);
  }
}

TEST_CASE("lifting through composed maps equals the composition of lifts") {
  // (2,2,4) -> (2,2,3) -> (2,2,2), composed as [4]->[2]
  CollapsingMap first{{{1, 2}, {1, 2}, {1, 2, 3, 3}}};   // 4 -> 3 levels
  CollapsingMap second{{{1, 2}, {1, 2}, {1, 2, 2}}};     // 3 -> 2 levels
  CollapsingMap composed{{{1, 2}, {1, 2}, {1, 2, 2, 2}}};

  const auto base = cone_of(2, 2, 2);
  const auto spec24 = make_level_spec({2, 2, 4});
  const auto spec23 = make_level_spec({2, 2, 3});
  for (std::size_t f = 0; f < base.facets.size(); ++f) {
    const auto pat = pattern_of(base, f);
    const auto step = lift_facet(spec23, n3f(), second, pat);
    const auto two_step = lift_facet(spec24, n3f(), first, step.pattern);
    const auto direct = lift_facet(spec24, n3f(), composed, pat);
    CHECK(two_step.pattern.marks == direct.pattern.marks);
    CHECK(two_step.is_facet == direct.is_facet);
  }
}

TEST_CASE("closed-form facet counts match enumeration for p = 2") {
  CHECK(facet_count_2qr(2, 2) == 16);
  CHECK(facet_count_2qr(3, 3) == 57);
  CHECK(facet_count_2qr(3, 4) == 110);
  for (auto [q, r] : {std::pair{2, 2}, {2, 3}, {2, 4}, {3, 3}, {3, 4}}) {
    const auto cone = cone_of(2, q, r);
    CHECK(static_cast<long long>(cone.facets.size()) == facet_count_2qr(q, r));
  }
}

TEST_CASE("the lower bound is tight exactly in the p = 2 regime") {
  CHECK(facet_count_lower_bound(2, 2, 2) == 16);
  CHECK(facet_count_lower_bound(3, 3, 3) == 135);
  CHECK(facet_count_lower_bound(2, 3, 4) == 110);
  for (auto [p, q, r] :
       {std::tuple{2, 2, 2}, {2, 2, 3}, {2, 3, 3}, {2, 3, 4}, {3, 3, 3}}) {
    const auto count = static_cast<long long>(cone_of(p, q, r).facets.size());
    const auto bound = facet_count_lower_bound(p, q, r);
    CHECK(bound <= count);
    if (p == 2)
      CHECK(bound == count);
    else
      CHECK(bound < count);
  }
}

TEST_CASE("boundary oracle on the worked examples") {
  const auto cone = cone_of(2, 2, 2);
  CHECK(boundary_oracle(cone, table_of({2, 2, 2}, {3, 1, 4, 1, 5, 9, 2, 6})));
  CHECK_FALSE(boundary_oracle(cone, table_of({2, 2, 2}, {0, 1, 1, 1, 1, 1, 1, 0})));
  CHECK_FALSE(boundary_oracle(cone, table_of({2, 2, 2}, {0, 0, 1, 1, 1, 1, 1, 1})));
  CHECK(boundary_oracle(table_of({2, 2, 2}, {1, 1, 1, 1, 1, 1, 1, 1}), n3f()));
}

TEST_CASE("collapsibility report for 2x3x4: everything reaches 2x2x2") {
  ConeCache cache;
  const auto report = collapsibility_report(make_level_spec({2, 3, 4}), cache);
  CHECK(report.smallest_target == std::vector<int>{2, 2, 2});
  std::size_t margin = 0;
  for (const auto& o : report.orbits) {
    CHECK(o.kind != OrbitProvenance::Kind::NonCollapsible);
    if (o.kind == OrbitProvenance::Kind::MarginFacet) ++margin;
  }
  CHECK(margin == 3);  // one orbit per two-way margin block
  CHECK(report.conjecture_applicable);  // 4 > 3
  CHECK(report.conjecture_holds);       // everything collapses to (2,3,3)
}

TEST_CASE("collapsibility report for the base 2x2x2 cone") {
  ConeCache cache;
  const auto report = collapsibility_report(make_level_spec({2, 2, 2}), cache);
  CHECK(report.smallest_target == std::vector<int>{2, 2, 2});
  CHECK_FALSE(report.conjecture_applicable);
  std::size_t margin = 0, noncol = 0;
  for (const auto& o : report.orbits) {
    if (o.kind == OrbitProvenance::Kind::MarginFacet) ++margin;
    if (o.kind == OrbitProvenance::Kind::NonCollapsible) ++noncol;
  }
  CHECK(margin == 3);
  CHECK(noncol == 1);  // the antipodal orbit has no strictly smaller source
}

TEST_CASE("cone JSON export shape") {
  const auto cone = cone_of(2, 2, 2);
  const auto j = cone_to_json(cone);
  CHECK(j.at("spec") == nlohmann::json::array({2, 2, 2}));
  CHECK(j.at("dim") == 7);
  CHECK(j.at("facets").size() == 16);
  CHECK(j.at("orbits").size() == 4);
  for (const auto& f : j.at("facets")) {
    CHECK(f.at("normal").size() == cone.ambient_dim);
    CHECK(f.at("pattern").get<std::string>().size() == 8);
  }
}
