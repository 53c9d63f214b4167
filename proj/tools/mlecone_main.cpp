#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mlecone/cone.hpp"
#include "mlecone/existence.hpp"
#include "mlecone/reduced_system.hpp"

namespace {

using nlohmann::json;
using namespace mlecone;

constexpr int kExitExists = 0;
constexpr int kExitUsage = 1;
constexpr int kExitResource = 2;
constexpr int kExitNoMle = 3;
constexpr int kExitDisagree = 4;

struct CommonOpts {
  std::size_t budget_rays = 100;
  std::size_t budget_dim = 50;
  int jobs = 1;
  bool long_mode = false;
  bool human = false;
  std::string output;

  ConeBudget budget() const {
    if (long_mode) return ConeBudget{128, 100};
    return ConeBudget{budget_rays, budget_dim};
  }
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--budget-rays", opts.budget_rays,
                  "Max extreme rays for facet enumeration");
  cmd->add_option("--budget-dim", opts.budget_dim,
                  "Max ambient dimension for facet enumeration");
  cmd->add_option("--jobs", opts.jobs, "Worker thread cap");
  cmd->add_flag("--long", opts.long_mode,
                "Allow long-running enumerations (raises budgets)");
  cmd->add_flag("--human", opts.human, "Human-readable summary instead of JSON");
  cmd->add_option("--output,-o", opts.output, "Write the JSON report to a file");
}

void emit(const json& report, const CommonOpts& opts,
          const std::string& human_text) {
  if (!opts.output.empty()) {
    std::ofstream out(opts.output);
    if (!out) throw std::runtime_error("cannot write " + opts.output);
    out << report.dump(2) << '\n';
  }
  if (opts.human)
    std::cout << human_text;
  else if (opts.output.empty())
    std::cout << report.dump(2) << '\n';
}

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

int run_check(const std::string& model_text, const std::string& table_path,
              const std::vector<int>& levels, const std::string& method,
              const std::string& face_mode, const CommonOpts& opts) {
  const SimplicialComplex model = parse_complex(model_text);
  ContingencyTable table = [&] {
    try {
      return read_table_file(table_path, levels);
    } catch (const ParseError& e) {
      throw std::runtime_error(std::string("bad table file: ") + e.what());
    }
  }();
  const FaceMode mode =
      face_mode == "all" ? FaceMode::AllFaces : FaceMode::FacetsOnly;

  json report;
  report["schema"] = 1;
  report["command"] = "check";
  report["model"] = format_complex(model);
  report["levels"] = table.spec.levels;
  report["method"] = method;
  json methods = json::object();

  std::optional<bool> direct, kernel, decomposed, oracle;
  ExistenceVerdict verdict;
  if (method == "direct" || method == "all") {
    auto start = std::chrono::steady_clock::now();
    verdict = mle_exists(table, model, opts.jobs, mode);
    direct = verdict.exists;
    json m = verdict_to_json(verdict, table.spec);
    m["elapsed_ms"] = ms_since(start);
    methods["direct"] = std::move(m);
  }
  if (method == "all") {
    auto start = std::chrono::steady_clock::now();
    kernel = exists_kernel_witness(table, model, mode).exists;
    methods["kernel"] = {{"exists", *kernel}, {"elapsed_ms", ms_since(start)}};
  }
  if (method == "decomposed" || method == "all") {
    auto start = std::chrono::steady_clock::now();
    decomposed = mle_exists_decomposed(table, model);
    methods["decomposed"] = {{"exists", *decomposed},
                             {"elapsed_ms", ms_since(start)}};
  }
  if (method == "oracle" ||
      (method == "all" &&
       cell_count(table.spec) <= opts.budget().max_rays)) {
    auto start = std::chrono::steady_clock::now();
    try {
      oracle = boundary_oracle(table, model, opts.budget());
      methods["oracle"] = {{"exists", *oracle}, {"elapsed_ms", ms_since(start)}};
    } catch (const BudgetError&) {
      if (method == "oracle") throw;  // explicit request: report the error
    }
  }
  report["methods"] = std::move(methods);

  std::vector<bool> verdicts;
  for (const auto& v : {direct, kernel, decomposed, oracle})
    if (v.has_value()) verdicts.push_back(*v);
  const bool agree =
      std::all_of(verdicts.begin(), verdicts.end(),
                  [&](bool b) { return b == verdicts.front(); });
  report["agree"] = agree;
  const bool exists = verdicts.front();
  report["exists"] = exists;

  std::string human = std::string("MLE ") + (exists ? "exists" : "does not exist") +
                      " for " + format_complex(model) + "\n";
  if (direct.has_value() && !exists) {
    human += "facial set:";
    for (std::size_t idx : verdict.facial_cells) {
      human += " (";
      const auto cell = cell_of_index(idx, table.spec);
      for (std::size_t j = 0; j < cell.size(); ++j)
        human += (j ? "," : "") + std::to_string(cell[j]);
      human += ")";
    }
    human += "\n";
  }
  emit(report, opts, human);
  if (!agree) return kExitDisagree;
  return exists ? kExitExists : kExitNoMle;
}

int run_triangulate(const std::string& model_text, const CommonOpts& opts) {
  const SimplicialComplex model = parse_complex(model_text);
  const ChordalCover cover = chordal_triangulation(model);
  json report;
  report["schema"] = 1;
  report["command"] = "triangulate";
  report["model"] = format_complex(model);
  report["cliques"] = cover.cliques;
  report["width"] = cover.width;
  report["elimination_order"] = cover.elimination_order;
  std::string human = "width " + std::to_string(cover.width) + ", cliques:";
  for (const auto& c : cover.cliques) {
    human += " {";
    for (std::size_t i = 0; i < c.size(); ++i)
      human += (i ? "," : "") + std::to_string(c[i]);
    human += "}";
  }
  emit(report, opts, human + "\n");
  return 0;
}

SimplicialComplex model_for_levels(const std::string& model_text,
                                   const std::vector<int>& levels) {
  if (!model_text.empty()) return parse_complex(model_text);
  if (levels.size() == 3) return no_three_factor();
  throw CLI::ValidationError("--model is required when --levels is not a triple");
}

int run_facets(const std::vector<int>& levels, const std::string& model_text,
               bool table1, bool check_lower_bound, const CommonOpts& opts) {
  const SimplicialComplex model = model_for_levels(model_text, levels);
  const LevelSpec spec = make_level_spec(levels);
  auto start = std::chrono::steady_clock::now();
  ConeCache cache;
  const ConeDescription& cone = cache.get(spec, model, opts.budget());
  const auto orbits = orbit_classify(cone);

  json report = cone_to_json(cone);
  report["schema"] = 1;
  report["command"] = "facets";
  report["facet_count"] = cone.facets.size();
  report["orbit_count"] = orbits.size();
  report["elapsed_ms"] = ms_since(start);

  std::string human;
  if (check_lower_bound && spec.k() == 3) {
    long long bound = facet_count_lower_bound(spec.levels[0], spec.levels[1],
                                              spec.levels[2]);
    report["lower_bound"] = bound;
    report["lower_bound_holds"] =
        bound <= static_cast<long long>(cone.facets.size());
    human += "lower bound " + std::to_string(bound) + " <= " +
             std::to_string(cone.facets.size()) + "\n";
  }
  if (table1 && spec.k() == 3) {
    const CollapseReport cr = collapsibility_report(spec, cache, opts.budget());
    json row;
    row["p"] = spec.levels[0];
    row["q"] = spec.levels[1];
    row["r"] = spec.levels[2];
    row["dim"] = cone.dim;
    row["extreme_rays"] = cone.extreme_rays.size();
    row["facets"] = cone.facets.size();
    row["orbits"] = orbits.size();
    row["collapsing"] = cr.smallest_target;
    report["table1_row"] = row;
    human += std::to_string(spec.levels[0]) + " " +
             std::to_string(spec.levels[1]) + " " +
             std::to_string(spec.levels[2]) + " | " +
             std::to_string(cone.dim) + " " +
             std::to_string(cone.extreme_rays.size()) + " " +
             std::to_string(cone.facets.size()) + " " +
             std::to_string(orbits.size()) + " |";
    for (int d : cr.smallest_target) human += " " + std::to_string(d);
    human += "\n";
  } else {
    human += "dim " + std::to_string(cone.dim) + ", rays " +
             std::to_string(cone.extreme_rays.size()) + ", facets " +
             std::to_string(cone.facets.size()) + ", orbits " +
             std::to_string(orbits.size()) + "\n";
  }
  emit(report, opts, human);
  return 0;
}

int run_collapse_report(const std::vector<int>& levels, const CommonOpts& opts) {
  const LevelSpec spec = make_level_spec(levels);
  ConeCache cache;
  const CollapseReport cr = collapsibility_report(spec, cache, opts.budget());

  json report;
  report["schema"] = 1;
  report["command"] = "collapse-report";
  report["levels"] = spec.levels;
  json orbits = json::array();
  std::string human;
  for (const auto& o : cr.orbits) {
    json entry;
    entry["pattern"] = o.pattern;
    entry["orbit_size"] = o.orbit_size;
    switch (o.kind) {
      case OrbitProvenance::Kind::MarginFacet:
        entry["provenance"] = "margin-facet";
        human += "orbit size " + std::to_string(o.orbit_size) + ": margin facet\n";
        break;
      case OrbitProvenance::Kind::CollapsedFrom:
        entry["provenance"] = "collapsed-from";
        entry["from_levels"] = o.from_levels;
        human += "orbit size " + std::to_string(o.orbit_size) + ": collapses to";
        for (int d : o.from_levels) human += " " + std::to_string(d);
        human += "\n";
        break;
      case OrbitProvenance::Kind::NonCollapsible:
        entry["provenance"] = "non-collapsible";
        human += "orbit size " + std::to_string(o.orbit_size) +
                 ": NON-COLLAPSIBLE\n";
        break;
    }
    orbits.push_back(std::move(entry));
  }
  report["orbits"] = std::move(orbits);
  report["smallest_target"] = cr.smallest_target;
  report["conjecture_applicable"] = cr.conjecture_applicable;
  report["conjecture_holds"] = cr.conjecture_holds;
  human += "smallest covering target:";
  for (int d : cr.smallest_target) human += " " + std::to_string(d);
  human += "\n";
  if (cr.conjecture_applicable && !cr.conjecture_holds)
    human += "counterexample to the collapsing conjecture found\n";
  emit(report, opts, human);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact polyhedral existence analysis for hierarchical "
               "log-linear model MLEs"};
  app.require_subcommand(1);

  CommonOpts opts;
  if (const char* env = std::getenv("MLECONE_LONG"))
    opts.long_mode = std::string(env) == "1";

  std::string model_text, table_path, method = "direct", face_mode = "facets";
  std::vector<int> levels;

  CLI::App* check = app.add_subcommand("check", "Decide MLE existence for a table");
  check->add_option("--model", model_text, "Model string, e.g. \"[12][13][23]\"")
      ->required();
  check->add_option("--table", table_path, "Table file (.json or .csv)")
      ->required();
  check->add_option("--levels", levels, "Level override for CSV tables");
  check->add_option("--method", method, "direct|decomposed|oracle|all")
      ->check(CLI::IsMember({"direct", "decomposed", "oracle", "all"}));
  check->add_option("--face-mode", face_mode, "facets|all design-matrix rows")
      ->check(CLI::IsMember({"facets", "all"}));
  add_common(check, opts);

  CLI::App* tri = app.add_subcommand("triangulate", "Chordal cover and width");
  tri->add_option("--model", model_text, "Model string")->required();
  add_common(tri, opts);

  bool table1 = false, check_bound = false;
  CLI::App* fac = app.add_subcommand("facets", "Enumerate marginal-cone facets");
  fac->add_option("--levels", levels, "Levels, e.g. --levels 3 3 3")->required();
  fac->add_option("--model", model_text,
                  "Model string (default [12][13][23] for triples)");
  fac->add_flag("--table1", table1, "Emit a summary-table row (with collapsing)");
  fac->add_flag("--check-lower-bound", check_bound,
                "Compare the closed-form lower bound against the count");
  add_common(fac, opts);

  CLI::App* col = app.add_subcommand("collapse-report",
                                     "Per-orbit collapsing provenance");
  col->add_option("--levels", levels, "Levels, e.g. --levels 3 3 4")->required();
  add_common(col, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check->parsed())
      return run_check(model_text, table_path, levels, method, face_mode, opts);
    if (tri->parsed()) return run_triangulate(model_text, opts);
    if (fac->parsed())
      return run_facets(levels, model_text, table1, check_bound, opts);
    if (col->parsed()) return run_collapse_report(levels, opts);
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  }
  return kExitUsage;
}
