#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "mlecone/design_matrix.hpp"
#include "mlecone/simplex.hpp"

namespace mlecone {

/// Outcome of the relative-interior membership test t in relint(P).
/// Exactly one of witness/certificate is populated:
///   exists  => witness x with A x = t and x >= epsilon_star * 1 > 0;
///   !exists => certificate c with c.a_i <= c.t for every column, strict
///              exactly on facial_cells (the cells forced to zero by t).
struct ExistenceVerdict {
  bool exists = false;
  Rational epsilon_star;
  QVec witness;
  QVec certificate;
  std::vector<std::size_t> facial_cells;  // linear cell indices, sorted
};

/// Direct decision: max epsilon s.t. A x = t, x >= epsilon, epsilon <= 1.
ExistenceVerdict mle_exists(const ContingencyTable& table,
                            const SimplicialComplex& model, int jobs = 1,
                            FaceMode mode = FaceMode::FacetsOnly);

/// Haberman-form decision: max epsilon s.t. A z = 0, n + z >= epsilon,
/// epsilon <= 1. Independent formulation, shared solver.
struct KernelWitness {
  bool exists = false;
  QVec z;
};
KernelWitness exists_kernel_witness(const ContingencyTable& table,
                                    const SimplicialComplex& model,
                                    FaceMode mode = FaceMode::FacetsOnly);

/// Cells that are zero in every nonnegative x with A x = t, by one LP per
/// cell (max x_i, x_i <= 1). Empty iff the MLE exists.
std::vector<std::size_t> facial_set(const ContingencyTable& table,
                                    const SimplicialComplex& model,
                                    int jobs = 1,
                                    FaceMode mode = FaceMode::FacetsOnly);

nlohmann::json verdict_to_json(const ExistenceVerdict& v,
                               const LevelSpec& spec);

}  // namespace mlecone
