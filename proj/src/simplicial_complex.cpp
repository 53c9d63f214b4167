#include "mlecone/simplicial_complex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "mlecone/rational.hpp"

namespace mlecone {

namespace {

using Vset = std::uint32_t;  // vertex subsets for K <= 31, bit v-1 = vertex v

Vset to_mask(const std::vector<int>& verts) {
  Vset m = 0;
  for (int v : verts) m |= Vset{1} << (v - 1);
  return m;
}

std::vector<int> from_mask(Vset m) {
  std::vector<int> out;
  for (int v = 1; m != 0; ++v, m >>= 1)
    if (m & 1) out.push_back(v);
  return out;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<Vset> facet_masks(const SimplicialComplex& model) {
  std::vector<Vset> out;
  out.reserve(model.facets.size());
  for (const auto& f : model.facets) out.push_back(to_mask(f));
  return out;
}

SimplicialComplex subcomplex(const SimplicialComplex& model,
                             const std::vector<Vset>& masks,
                             std::uint64_t which) {
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < masks.size(); ++i)
    if (which >> i & 1) groups.push_back(model.facets[i]);
  return make_complex(model.vertex_count, std::move(groups),
                      /*require_cover=*/false);
}

}  // namespace

SimplicialComplex make_complex(int vertex_count,
                               std::vector<std::vector<int>> facet_groups,
                               bool require_cover) {
  if (vertex_count < 1 || vertex_count > 31)
    throw ParseError("vertex count must be in 1..31, got " +
                     std::to_string(vertex_count));
  if (facet_groups.empty()) throw ParseError("a complex needs at least one facet");

  std::vector<Vset> masks;
  for (auto& g : facet_groups) {
    if (g.empty()) throw ParseError("empty facet group");
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    for (int v : g)
      if (v < 1 || v > vertex_count)
        throw ParseError("vertex index " + std::to_string(v) +
                         " out of range 1.." + std::to_string(vertex_count));
    masks.push_back(to_mask(g));
  }
  // Drop groups contained in another group.
  std::vector<std::vector<int>> kept;
  for (std::size_t i = 0; i < masks.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < masks.size() && maximal; ++j) {
      if (i == j) continue;
      if ((masks[i] | masks[j]) == masks[j] &&
          (masks[i] != masks[j] || j < i))
        maximal = false;
    }
    if (maximal) kept.push_back(facet_groups[i]);
  }
  std::sort(kept.begin(), kept.end(), lex_less);
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());

  if (require_cover) {
    Vset all = 0;
    for (const auto& f : kept) all |= to_mask(f);
    for (int v = 1; v <= vertex_count; ++v)
      if (!(all >> (v - 1) & 1))
        throw ParseError("vertex " + std::to_string(v) +
                         " does not appear in any facet");
  }
  return SimplicialComplex{vertex_count, std::move(kept)};
}

SimplicialComplex parse_complex(const std::string& text,
                                std::optional<int> declared_k) {
  if (text.empty()) throw ParseError("empty model string");
  std::vector<std::vector<int>> groups;
  std::size_t pos = 0;
  int max_vertex = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
    if (text[pos] != '[')
      throw ParseError("expected '[' at position " + std::to_string(pos));
    std::size_t close = text.find(']', pos);
    if (close == std::string::npos)
      throw ParseError("unbalanced '[' at position " + std::to_string(pos));
    std::string body = text.substr(pos + 1, close - pos - 1);
    if (body.empty())
      throw ParseError("empty bracket group at position " + std::to_string(pos));
    std::vector<int> verts;
    if (body.find(',') != std::string::npos) {
      std::stringstream ss(body);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item.empty() ||
            !std::all_of(item.begin(), item.end(), [](unsigned char c) {
              return std::isdigit(c);
            }))
          throw ParseError("bad vertex '" + item + "' at position " +
                           std::to_string(pos));
        int v = std::stoi(item);
        if (v == 0) throw ParseError("vertex index 0 at position " +
                                     std::to_string(pos));
        verts.push_back(v);
      }
    } else {
      for (char c : body) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
          throw ParseError(std::string("bad character '") + c +
                           "' at position " + std::to_string(pos));
        if (c == '0') throw ParseError("vertex index 0 at position " +
                                       std::to_string(pos));
        verts.push_back(c - '0');
      }
    }
    for (int v : verts) max_vertex = std::max(max_vertex, v);
    groups.push_back(std::move(verts));
    pos = close + 1;
  }
  int k = declared_k.value_or(max_vertex);
  if (max_vertex > k)
    throw ParseError("vertex index " + std::to_string(max_vertex) +
                     " exceeds declared K=" + std::to_string(k));
  return make_complex(k, std::move(groups));
}

std::vector<std::vector<int>> faces(const SimplicialComplex& model) {
  std::set<std::vector<int>> seen;
  seen.insert(std::vector<int>{});
  for (const auto& f : model.facets) {
    Vset m = to_mask(f);
    for (Vset s = m; s != 0; s = (s - 1) & m) seen.insert(from_mask(s));
  }
  std::vector<std::vector<int>> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return lex_less(a, b);
  });
  return out;
}

bool is_face(const SimplicialComplex& model, const std::vector<int>& subset) {
  Vset s = to_mask(subset);
  for (const auto& f : model.facets)
    if ((s & ~to_mask(f)) == 0) return true;
  return false;
}

std::optional<Decomposition> find_decomposition(const SimplicialComplex& model) {
  const std::size_t f = model.facets.size();
  if (f < 2) return std::nullopt;
  if (f > 22)
    throw std::runtime_error("find_decomposition supports at most 22 facets");
  const auto masks = facet_masks(model);

  // Candidate separators are (union of side 1) & (union of side 2); a split
  // is valid when the separator is a face of both sides. Side 1 is pinned
  // to contain facet 0 so each bipartition is visited once.
  bool found = false;
  Vset best_sep = 0;
  std::uint64_t best_side = 0;
  const std::uint64_t full = (std::uint64_t{1} << f) - 1;
  for (std::uint64_t side = 1; side < full; side += 2) {  // facet 0 in side 1
    Vset u1 = 0, u2 = 0;
    for (std::size_t i = 0; i < f; ++i)
      (side >> i & 1 ? u1 : u2) |= masks[i];
    Vset sep = u1 & u2;
    bool left_ok = false, right_ok = false;
    for (std::size_t i = 0; i < f; ++i) {
      if ((sep & ~masks[i]) != 0) continue;
      (side >> i & 1 ? left_ok : right_ok) = true;
      if (left_ok && right_ok) break;
    }
    if (!left_ok || !right_ok) continue;
    if (!found) {
      found = true;
    } else {
      int bs = __builtin_popcount(best_sep), cs = __builtin_popcount(sep);
      if (bs < cs) continue;
      if (bs == cs) {
        auto bv = from_mask(best_sep), cv = from_mask(sep);
        if (!lex_less(cv, bv) && (cv != bv || best_side <= side)) continue;
      }
    }
    best_sep = sep;
    best_side = side;
  }
  if (!found) return std::nullopt;
  return Decomposition{subcomplex(model, masks, best_side), from_mask(best_sep),
                       subcomplex(model, masks, ~best_side & full)};
}

namespace {

bool decomposable_rec(const SimplicialComplex& model,
                      std::map<std::vector<std::vector<int>>, bool>& memo) {
  if (model.facets.size() <= 1) return true;
  auto it = memo.find(model.facets);
  if (it != memo.end()) return it->second;
  memo[model.facets] = false;  // cycle guard; overwritten below

  const std::size_t f = model.facets.size();
  const auto masks = facet_masks(model);
  const std::uint64_t full = (std::uint64_t{1} << f) - 1;
  bool ok = false;
  for (std::uint64_t side = 1; side < full && !ok; side += 2) {
    Vset u1 = 0, u2 = 0;
    for (std::size_t i = 0; i < f; ++i)
      (side >> i & 1 ? u1 : u2) |= masks[i];
    Vset sep = u1 & u2;
    bool left_ok = false, right_ok = false;
    for (std::size_t i = 0; i < f; ++i) {
      if ((sep & ~masks[i]) != 0) continue;
      (side >> i & 1 ? left_ok : right_ok) = true;
    }
    if (!left_ok || !right_ok) continue;
    ok = decomposable_rec(subcomplex(model, masks, side), memo) &&
         decomposable_rec(subcomplex(model, masks, ~side & full), memo);
  }
  memo[model.facets] = ok;
  return ok;
}

struct Graph {
  int n = 0;
  std::vector<Vset> adj;  // adj[v-1], bit w-1 set iff edge vw

  void add_edge(int v, int w) {
    adj[v - 1] |= Vset{1} << (w - 1);
    adj[w - 1] |= Vset{1} << (v - 1);
  }
};

Graph one_skeleton(const SimplicialComplex& model) {
  Graph g;
  g.n = model.vertex_count;
  g.adj.assign(g.n, 0);
  for (const auto& f : model.facets)
    for (std::size_t a = 0; a < f.size(); ++a)
      for (std::size_t b = a + 1; b < f.size(); ++b) g.add_edge(f[a], f[b]);
  return g;
}

// Eliminates vertices in `order` on a copy of g, returning the cliques
// {v} u N(v) recorded at each step and the resulting width.
std::pair<std::vector<Vset>, int> run_elimination(Graph g,
                                                  const std::vector<int>& order) {
  std::vector<Vset> cliques;
  Vset alive = (Vset{1} << g.n) - 1;
  int width = 0;
  for (int v : order) {
    Vset nb = g.adj[v - 1] & alive;
    Vset clique = nb | (Vset{1} << (v - 1));
    cliques.push_back(clique);
    width = std::max(width, __builtin_popcount(clique) - 1);
    // connect neighbors pairwise
    for (Vset rest = nb; rest != 0; rest &= rest - 1) {
      int w = __builtin_ctz(rest) + 1;
      g.adj[w - 1] |= nb & ~(Vset{1} << (w - 1));
    }
    alive &= ~(Vset{1} << (v - 1));
  }
  return {cliques, width};
}

std::vector<int> min_fill_order(const Graph& g0) {
  Graph g = g0;
  Vset alive = (Vset{1} << g.n) - 1;
  std::vector<int> order;
  for (int step = 0; step < g.n; ++step) {
    int best = -1, best_fill = -1, best_deg = -1;
    for (int v = 1; v <= g.n; ++v) {
      if (!(alive >> (v - 1) & 1)) continue;
      Vset nb = g.adj[v - 1] & alive;
      int deg = __builtin_popcount(nb);
      int fill = 0;
      for (Vset rest = nb; rest != 0; rest &= rest - 1) {
        int w = __builtin_ctz(rest) + 1;
        fill += __builtin_popcount(nb & ~g.adj[w - 1] & (rest - 1) & ~rest);
      }
      if (best < 0 || fill < best_fill ||
          (fill == best_fill && deg < best_deg)) {
        best = v;
        best_fill = fill;
        best_deg = deg;
      }
    }
    order.push_back(best);
    Vset nb = g.adj[best - 1] & alive;
    for (Vset rest = nb; rest != 0; rest &= rest - 1) {
      int w = __builtin_ctz(rest) + 1;
      g.adj[w - 1] |= nb & ~(Vset{1} << (w - 1));
    }
    alive &= ~(Vset{1} << (best - 1));
  }
  return order;
}

// Vertices outside `gone` reachable from v through paths internal to `gone`.
Vset reach_through(const Graph& g, int v, Vset gone) {
  Vset seen = Vset{1} << (v - 1);
  Vset frontier = seen;
  Vset result = 0;
  while (frontier != 0) {
    int w = __builtin_ctz(frontier) + 1;
    frontier &= frontier - 1;
    Vset nb = g.adj[w - 1] & ~seen;
    seen |= nb;
    result |= nb & ~gone;
    frontier |= nb & gone;
  }
  return result & ~(Vset{1} << (v - 1));
}

// Held-Karp style subset DP: width(U) = min over last-eliminated v in U of
// max(width(U \ v), |reach(v, U \ v)|). Exact tree width for small K.
std::pair<int, std::vector<int>> exact_width_order(const Graph& g) {
  const int n = g.n;
  const std::uint32_t total = std::uint32_t{1} << n;
  std::vector<std::int8_t> dp(total, 0);
  std::vector<std::int8_t> choice(total, -1);
  for (std::uint32_t u = 1; u < total; ++u) {
    int best = 127, arg = -1;
    for (std::uint32_t rest = u; rest != 0; rest &= rest - 1) {
      int v = __builtin_ctz(rest) + 1;
      std::uint32_t prev = u & ~(std::uint32_t{1} << (v - 1));
      int cand = std::max<int>(dp[prev],
                               __builtin_popcount(reach_through(g, v, prev)));
      if (cand < best) {
        best = cand;
        arg = v;
      }
    }
    dp[u] = static_cast<std::int8_t>(best);
    choice[u] = static_cast<std::int8_t>(arg);
  }
  // Recover an order: choice[u] is eliminated last among u, so unwind.
  std::vector<int> order(n);
  std::uint32_t u = total - 1;
  for (int i = n - 1; i >= 0; --i) {
    int v = choice[u];
    order[i] = v;
    u &= ~(std::uint32_t{1} << (v - 1));
  }
  return {dp[total - 1], order};
}

}  // namespace

bool is_decomposable(const SimplicialComplex& model) {
  std::map<std::vector<std::vector<int>>, bool> memo;
  return decomposable_rec(model, memo);
}

ChordalCover chordal_triangulation(const SimplicialComplex& model) {
  const Graph g = one_skeleton(model);
  std::vector<int> order = min_fill_order(g);
  auto [cliques, width] = run_elimination(g, order);
  if (model.vertex_count <= 12) {
    auto [exact_w, exact_order] = exact_width_order(g);
    if (exact_w < width) {
      order = std::move(exact_order);
      std::tie(cliques, width) = run_elimination(g, order);
    }
  }
  // Keep maximal cliques only.
  std::vector<Vset> maximal;
  for (Vset c : cliques) {
    bool keep = true;
    for (Vset d : cliques)
      if (c != d && (c & ~d) == 0) { keep = false; break; }
    if (keep) maximal.push_back(c);
  }
  std::sort(maximal.begin(), maximal.end());
  maximal.erase(std::unique(maximal.begin(), maximal.end()), maximal.end());
  std::vector<std::vector<int>> clique_sets;
  for (Vset c : maximal) clique_sets.push_back(from_mask(c));
  std::sort(clique_sets.begin(), clique_sets.end(), lex_less);
  return ChordalCover{std::move(clique_sets), std::move(order), width};
}

nlohmann::json complex_to_json(const SimplicialComplex& model) {
  return nlohmann::json{{"k", model.vertex_count}, {"facets", model.facets}};
}

SimplicialComplex complex_from_json(const nlohmann::json& j) {
  if (!j.contains("k") || !j.contains("facets"))
    throw ParseError("complex JSON needs fields \"k\" and \"facets\"");
  return make_complex(j.at("k").get<int>(),
                      j.at("facets").get<std::vector<std::vector<int>>>());
}

SimplicialComplex cycle_complex(int k) {
  if (k < 3) throw ParseError("a cycle needs K >= 3");
  std::vector<std::vector<int>> edges;
  for (int v = 1; v < k; ++v) edges.push_back({v, v + 1});
  edges.push_back({1, k});
  return make_complex(k, std::move(edges));
}

SimplicialComplex no_three_factor() { return parse_complex("[12][13][23]"); }

std::string format_complex(const SimplicialComplex& model) {
  std::string out;
  const bool wide = model.vertex_count >= 10;
  for (const auto& f : model.facets) {
    out += '[';
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (wide && i > 0) out += ',';
      out += std::to_string(f[i]);
    }
    out += ']';
  }
  return out;
}

}  // namespace mlecone
