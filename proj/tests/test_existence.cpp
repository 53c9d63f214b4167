#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "mlecone/cone.hpp"
#include "mlecone/existence.hpp"
#include "test_helpers.hpp"

using namespace mlecone;
using mlecone::testing::random_table;
using mlecone::testing::table_of;

namespace {

const SimplicialComplex& n3f() {
  static const SimplicialComplex model = no_three_factor();
  return model;
}

ContingencyTable antipodal_zero_table() {
  return table_of({2, 2, 2}, {0, 1, 1, 1, 1, 1, 1, 0});
}

QVec margins_q(const ContingencyTable& t, const SimplicialComplex& m) {
  const auto flat = margins_vector(t, m).flat();
  QVec out(flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) out[i] = to_rational(flat[i]);
  return out;
}

// Exact post-hoc validation of a verdict's artifacts.
void check_verdict_artifacts(const ContingencyTable& table,
                             const SimplicialComplex& model,
                             const ExistenceVerdict& v) {
  const auto a = build_design_matrix(table.spec, model);
  const QVec t = margins_q(table, model);
  if (v.exists) {
    REQUIRE(v.witness.size() == a.col_count);
    Rational min_x = v.witness[0];
    for (const auto& x : v.witness) {
      CHECK(x > 0);
      min_x = std::min(min_x, x);
    }
    CHECK(min_x >= v.epsilon_star);
    if (v.epsilon_star < 1) CHECK(min_x == v.epsilon_star);
    for (std::size_t r = 0; r < a.row_count; ++r) {
      Rational ax = 0;
      for (std::uint32_t c : a.rows[r]) ax += v.witness[c];
      CHECK(ax == t[r]);
    }
    CHECK(v.facial_cells.empty());
  } else {
    CHECK(v.epsilon_star == 0);
    REQUIRE_FALSE(v.facial_cells.empty());
    REQUIRE(v.certificate.size() == a.row_count);
    Rational ct = 0;
    for (std::size_t r = 0; r < a.row_count; ++r) ct += v.certificate[r] * t[r];
    std::size_t strict = 0;
    for (std::size_t i = 0; i < a.col_count; ++i) {
      Rational ca = 0;
      for (std::uint32_t r : a.column(i)) ca += v.certificate[r];
      CHECK(ca <= ct);
      const bool facial = std::binary_search(v.facial_cells.begin(),
                                             v.facial_cells.end(), i);
      CHECK((ca < ct) == facial);
      if (ca < ct) ++strict;
    }
    CHECK(strict == v.facial_cells.size());
    CHECK(strict > 0);  // certificate is not orthogonal-trivial
  }
}

}  // namespace

TEST_CASE("all-positive table: MLE exists with the table as witness basis") {
  const auto ones = table_of({2, 2, 2}, std::vector<long long>(8, 1));
  const auto v = mle_exists(ones, n3f());
  CHECK(v.exists);
  CHECK(v.epsilon_star == 1);
  check_verdict_artifacts(ones, n3f(), v);
}

TEST_CASE("antipodal zeros: no MLE, facial set {(1,1,1),(2,2,2)}") {
  const auto table = antipodal_zero_table();
  const auto v = mle_exists(table, n3f());
  CHECK_FALSE(v.exists);
  CHECK(v.epsilon_star == 0);
  CHECK(v.facial_cells == std::vector<std::size_t>{0, 7});
  check_verdict_artifacts(table, n3f(), v);

  // all two-way margins are strictly positive
  for (const auto& block : margins_vector(table, n3f()).blocks)
    for (long long x : block) CHECK(x > 0);
}

TEST_CASE("zero slice forces the whole slice into the facial set") {
  // third variable fixed at level 1 is all zero
  auto counts = std::vector<long long>(8, 2);
  const auto spec = make_level_spec({2, 2, 2});
  for (std::size_t i = 0; i < 8; ++i)
    if (cell_of_index(i, spec)[2] == 1) counts[i] = 0;
  const auto table = make_table(spec, counts);
  const auto cells = facial_set(table, n3f());
  std::vector<std::size_t> expect;
  for (std::size_t i = 0; i < 8; ++i)
    if (cell_of_index(i, spec)[2] == 1) expect.push_back(i);
  CHECK(cells == expect);
}

TEST_CASE("facial set is empty exactly when the MLE exists") {
  std::mt19937 rng(41);
  const auto spec = make_level_spec({2, 2, 2});
  for (int trial = 0; trial < 40; ++trial) {
    const auto table = random_table(spec, rng, 0.5);
    const auto v = mle_exists(table, n3f());
    CHECK(v.exists == facial_set(table, n3f()).empty());
  }
}

TEST_CASE("kernel-witness formulation on the worked examples") {
  const auto ones = table_of({2, 2, 2}, std::vector<long long>(8, 1));
  const auto kw = exists_kernel_witness(ones, n3f());
  CHECK(kw.exists);
  // n + z must be strictly positive and share margins with n
  const auto a = build_design_matrix(ones.spec, n3f());
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(to_rational(ones.counts[i]) + kw.z[i] > 0);
  for (std::size_t r = 0; r < a.row_count; ++r) {
    Rational az = 0;
    for (std::uint32_t c : a.rows[r]) az += kw.z[c];
    CHECK(az == 0);
  }
  CHECK_FALSE(exists_kernel_witness(antipodal_zero_table(), n3f()).exists);
}

TEST_CASE("direct and kernel-witness formulations agree (500 instances)") {
  std::mt19937 rng(43);
  const std::vector<std::pair<const char*, std::vector<int>>> cases = {
      {"[12][23]", {2, 3, 2}},
      {"[12][13][23]", {2, 2, 2}},
      {"[12][13][23]", {3, 3, 3}},
      {"[12][23][34][45][15]", {2, 2, 2, 2, 2}},
  };
  std::uniform_real_distribution<double> sparsity(0.3, 0.7);
  int disagreements = 0, nonexist = 0;
  for (int trial = 0; trial < 125; ++trial)
    for (const auto& [text, levels] : cases) {
      const auto model = parse_complex(text);
      const auto table =
          random_table(make_level_spec(levels), rng, sparsity(rng));
      const bool direct = mle_exists(table, model).exists;
      const bool kernel = exists_kernel_witness(table, model).exists;
      if (direct != kernel) ++disagreements;
      if (!direct) ++nonexist;
    }
  CHECK(disagreements == 0);
  CHECK(nonexist > 50);  // the sweep reaches the boundary often
}

TEST_CASE("200 random 3x3x3 tables match the facet-enumeration oracle") {
  std::mt19937 rng(47);
  const auto spec = make_level_spec({3, 3, 3});
  const auto cone = enumerate_facets(spec, n3f());
  for (int trial = 0; trial < 200; ++trial) {
    const auto table = random_table(spec, rng, 0.5);
    CAPTURE(trial);
    CHECK(mle_exists(table, n3f()).exists == boundary_oracle(cone, table));
  }
}

TEST_CASE("monotonicity: adding a positive table restores existence") {
  std::mt19937 rng(53);
  const auto spec = make_level_spec({2, 2, 2});
  int flipped = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto table = random_table(spec, rng, 0.6);
    if (mle_exists(table, n3f()).exists) continue;
    ++flipped;
    for (auto& c : table.counts) c += 1;
    CHECK(mle_exists(table, n3f()).exists);
  }
  CHECK(flipped > 5);
}

TEST_CASE("level permutations permute the facial set and keep the verdict") {
  std::mt19937 rng(59);
  const auto spec = make_level_spec({2, 3, 2});
  for (int trial = 0; trial < 30; ++trial) {
    const auto table = random_table(spec, rng, 0.55);
    // swap levels 1 and 3 of variable 2
    auto permuted = table;
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
      auto cell = cell_of_index(i, spec);
      if (cell[1] == 1) cell[1] = 3;
      else if (cell[1] == 3) cell[1] = 1;
      permuted.counts[linear_index(cell, spec)] = table.counts[i];
    }
    const auto v1 = mle_exists(table, n3f());
    const auto v2 = mle_exists(permuted, n3f());
    CHECK(v1.exists == v2.exists);
    std::vector<std::size_t> mapped;
    for (std::size_t i : v1.facial_cells) {
      auto cell = cell_of_index(i, spec);
      if (cell[1] == 1) cell[1] = 3;
      else if (cell[1] == 3) cell[1] = 1;
      mapped.push_back(linear_index(cell, spec));
    }
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == v2.facial_cells);
  }
}

TEST_CASE("the verdict depends on the table only through its margins") {
  // no-three-factor binary move: alternating +-1 on a 2x2x2 block keeps all
  // two-way margins
  const auto spec = make_level_spec({2, 2, 2});
  std::mt19937 rng(61);
  for (int trial = 0; trial < 40; ++trial) {
    auto table = random_table(spec, rng, 0.45);
    auto moved = table;
    bool ok = true;
    for (std::size_t i = 0; i < 8; ++i) {
      const auto cell = cell_of_index(i, spec);
      const int sign = (cell[0] + cell[1] + cell[2]) % 2 == 1 ? 1 : -1;
      moved.counts[i] += sign;
      if (moved.counts[i] < 0) ok = false;
    }
    if (!ok) continue;
    CHECK(margins_vector(table, n3f()).flat() ==
          margins_vector(moved, n3f()).flat());
    CHECK(mle_exists(table, n3f()).exists == mle_exists(moved, n3f()).exists);
  }
}

TEST_CASE("face mode does not change the verdict") {
  std::mt19937 rng(67);
  const auto spec = make_level_spec({2, 2, 2});
  for (int trial = 0; trial < 25; ++trial) {
    const auto table = random_table(spec, rng, 0.5);
    const auto facets = mle_exists(table, n3f(), 1, FaceMode::FacetsOnly);
    const auto all = mle_exists(table, n3f(), 1, FaceMode::AllFaces);
    CHECK(facets.exists == all.exists);
    CHECK(facets.facial_cells == all.facial_cells);
  }
}

TEST_CASE("facial set is parallel-safe") {
  const auto table = antipodal_zero_table();
  CHECK(facial_set(table, n3f(), 4) == facial_set(table, n3f(), 1));
}

TEST_CASE("verdict JSON shape") {
  const auto v = mle_exists(antipodal_zero_table(), n3f());
  const auto j = verdict_to_json(v, antipodal_zero_table().spec);
  CHECK(j.at("exists") == false);
  CHECK(j.at("epsilon") == "0");
  CHECK(j.at("facial_set") ==
        nlohmann::json::array({{1, 1, 1}, {2, 2, 2}}));
  CHECK(j.contains("certificate"));

  const auto ones = table_of({2, 2, 2}, std::vector<long long>(8, 1));
  const auto jw = verdict_to_json(mle_exists(ones, n3f()), ones.spec);
  CHECK(jw.at("exists") == true);
  CHECK(jw.at("witness").size() == 8);
}
