#include "mlecone/table.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mlecone/rational.hpp"

namespace mlecone {

namespace {

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r))
    throw std::overflow_error("count sum overflows 64 bits");
  return r;
}

}  // namespace

LevelSpec make_level_spec(std::vector<int> levels, bool allow_unit) {
  if (levels.empty()) throw DimensionError("level spec needs at least one variable");
  std::size_t cells = 1;
  for (int d : levels) {
    if (d < 1 || (d == 1 && !allow_unit))
      throw DimensionError("bad level count " + std::to_string(d));
    if (cells > (std::size_t{1} << 31) / static_cast<std::size_t>(d))
      throw DimensionError("cell grid too large");
    cells *= static_cast<std::size_t>(d);
  }
  return LevelSpec{std::move(levels)};
}

std::size_t cell_count(const LevelSpec& spec) {
  std::size_t n = 1;
  for (int d : spec.levels) n *= static_cast<std::size_t>(d);
  return n;
}

std::size_t linear_index(const std::vector<int>& cell, const LevelSpec& spec) {
  if (cell.size() != spec.levels.size())
    throw DimensionError("multi-index arity mismatch");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < cell.size(); ++j) {
    if (cell[j] < 1 || cell[j] > spec.levels[j])
      throw DimensionError("coordinate " + std::to_string(cell[j]) +
                           " out of range for variable " + std::to_string(j + 1));
    idx = idx * static_cast<std::size_t>(spec.levels[j]) +
          static_cast<std::size_t>(cell[j] - 1);
  }
  return idx;
}

std::vector<int> cell_of_index(std::size_t index, const LevelSpec& spec) {
  std::vector<int> cell(spec.levels.size());
  for (std::size_t j = spec.levels.size(); j-- > 0;) {
    cell[j] = static_cast<int>(index % static_cast<std::size_t>(spec.levels[j])) + 1;
    index /= static_cast<std::size_t>(spec.levels[j]);
  }
  return cell;
}

long long ContingencyTable::total() const {
  long long t = 0;
  for (long long c : counts) t = checked_add(t, c);
  return t;
}

ContingencyTable make_table(LevelSpec spec, std::vector<long long> counts) {
  if (counts.size() != cell_count(spec))
    throw DimensionError("count vector length " + std::to_string(counts.size()) +
                         " does not match cell count " +
                         std::to_string(cell_count(spec)));
  for (long long c : counts)
    if (c < 0) throw DimensionError("negative cell count");
  return ContingencyTable{std::move(spec), std::move(counts)};
}

ContingencyTable margin(const ContingencyTable& table,
                        const std::vector<int>& face) {
  const int k = table.spec.k();
  std::vector<int> vars = face;
  std::sort(vars.begin(), vars.end());
  for (int v : vars)
    if (v < 1 || v > k)
      throw DimensionError("variable index " + std::to_string(v) +
                           " out of range");
  std::vector<int> sub_levels;
  for (int v : vars) sub_levels.push_back(table.spec.levels[v - 1]);
  LevelSpec sub = sub_levels.empty()
                      ? LevelSpec{{1}}
                      : make_level_spec(std::move(sub_levels), true);
  // An empty face degenerates to a single cell: the grand total.
  std::vector<long long> out(vars.empty() ? 1 : cell_count(sub), 0);
  const std::size_t n = cell_count(table.spec);
  std::vector<int> cell(k, 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t sub_idx = 0;
    for (int v : vars)
      sub_idx = sub_idx * static_cast<std::size_t>(table.spec.levels[v - 1]) +
                static_cast<std::size_t>(cell[v - 1] - 1);
    out[sub_idx] = checked_add(out[sub_idx], table.counts[i]);
    for (int j = k - 1; j >= 0; --j) {  // row-major increment
      if (++cell[j] <= table.spec.levels[j]) break;
      cell[j] = 1;
    }
  }
  return ContingencyTable{vars.empty() ? LevelSpec{{1}} : sub, std::move(out)};
}

std::vector<long long> MarginVector::flat() const {
  std::vector<long long> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

MarginVector margins_vector(const ContingencyTable& table,
                            const SimplicialComplex& model, FaceMode mode) {
  if (table.spec.k() != model.vertex_count)
    throw DimensionError("table has " + std::to_string(table.spec.k()) +
                         " variables but model has " +
                         std::to_string(model.vertex_count));
  MarginVector mv;
  const auto face_list =
      mode == FaceMode::FacetsOnly ? model.facets : faces(model);
  for (const auto& f : face_list) {
    mv.block_faces.push_back(f);
    mv.blocks.push_back(margin(table, f).counts);
  }
  return mv;
}

ContingencyTable table_from_json(const nlohmann::json& j) {
  if (!j.contains("levels") || !j.contains("counts"))
    throw ParseError("table JSON needs fields \"levels\" and \"counts\"");
  return make_table(make_level_spec(j.at("levels").get<std::vector<int>>()),
                    j.at("counts").get<std::vector<long long>>());
}

nlohmann::json table_to_json(const ContingencyTable& table) {
  return nlohmann::json{{"levels", table.spec.levels},
                        {"counts", table.counts}};
}

ContingencyTable parse_table_csv(std::istream& in,
                                 const std::vector<int>& level_override) {
  std::vector<std::vector<int>> cells;
  std::vector<long long> values;
  std::vector<int> maxima;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string item;
    std::vector<long long> nums;
    while (std::getline(ss, item, ',')) {
      try {
        nums.push_back(std::stoll(item));
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" +
                         item + "'");
      }
    }
    if (nums.size() < 2)
      throw ParseError("line " + std::to_string(lineno) +
                       ": need i1,...,iK,count");
    std::vector<int> cell(nums.begin(), nums.end() - 1);
    if (maxima.empty()) maxima.assign(cell.size(), 0);
    if (cell.size() != maxima.size())
      throw ParseError("line " + std::to_string(lineno) + ": arity mismatch");
    for (std::size_t j = 0; j < cell.size(); ++j)
      maxima[j] = std::max(maxima[j], cell[j]);
    cells.push_back(std::move(cell));
    values.push_back(nums.back());
  }
  if (cells.empty()) throw ParseError("empty CSV table");
  LevelSpec spec = make_level_spec(
      level_override.empty() ? maxima : level_override);
  std::vector<long long> counts(cell_count(spec), 0);
  for (std::size_t i = 0; i < cells.size(); ++i)
    counts[linear_index(cells[i], spec)] =
        checked_add(counts[linear_index(cells[i], spec)], values[i]);
  return make_table(std::move(spec), std::move(counts));
}

ContingencyTable read_table_file(const std::string& path,
                                 const std::vector<int>& level_override) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
    return parse_table_csv(in, level_override);
  nlohmann::json j;
  in >> j;
  return table_from_json(j);
}

}  // namespace mlecone
