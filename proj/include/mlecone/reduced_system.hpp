#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "mlecone/design_matrix.hpp"

namespace mlecone {

/// The polynomial-size certificate system built from a chordal cover: one
/// variable block per clique (indexed by clique faces and face-cells), one
/// inequality per clique cell, and one sum-to-zero vector equation per face
/// of the cover that is not a face of the model.
struct ReducedSystem {
  struct Block {
    std::vector<int> clique;
    std::vector<std::vector<int>> faces;     // all faces incl. empty, (size, lex)
    std::vector<std::size_t> face_offset;    // within the block
    std::size_t var_count = 0;
    // One row per cell of the clique grid: coefficients a_i - t over the
    // block's variables, where t = A n restricted to the clique.
    std::vector<std::vector<long long>> inequalities;
  };
  struct Equation {
    std::vector<int> face;
    // Variable positions of c_t^F in each block containing the face;
    // the equation is componentwise over the face's cells.
    std::vector<std::pair<std::size_t, std::size_t>> terms;  // (block, offset)
    std::size_t cells = 0;
  };

  std::vector<Block> blocks;
  std::vector<Equation> equations;
  std::vector<std::size_t> block_var_offset;  // into the global variable vector
  std::size_t total_vars = 0;
  std::size_t total_inequalities = 0;
};

/// The inequality block of one clique treated as a saturated model on its
/// variables, in all-faces mode.
ReducedSystem::Block clique_cone_constraints(const ContingencyTable& table,
                                             const std::vector<int>& clique);

ReducedSystem build_reduced_system(const ContingencyTable& table,
                                   const SimplicialComplex& model,
                                   const ChordalCover& cover);

/// True iff every inequality is forced to equality over the system:
/// maximizes each row's slack (capped at 1) and requires optimum 0,
/// exiting early on the first positive slack.
bool is_linear_space(const ReducedSystem& sys);

/// Chordal triangulation + reduced system + linear-space test. Agrees with
/// the direct relative-interior decision on every input.
bool mle_exists_decomposed(const ContingencyTable& table,
                           const SimplicialComplex& model);

/// Plain-text LP interchange dump for cross-validation with other solvers.
void write_lp_text(const ReducedSystem& sys, std::ostream& out);

}  // namespace mlecone
