#pragma once

#include <cstdint>
#include <vector>

#include "mlecone/rational.hpp"

namespace mlecone {

/// Exact rank of an integer matrix (rows of equal length) by fraction-free
/// Bareiss elimination. Tries 128-bit arithmetic first and falls back to
/// arbitrary precision on overflow.
int exact_rank(const std::vector<std::vector<long long>>& rows);

/// Exact rank over arbitrary-precision integers.
int exact_rank_big(std::vector<ZVec> rows);

/// Basis of the right null space {x : M x = 0} of a rational matrix,
/// via reduced row echelon form. Basis vectors follow the free-column
/// order, each with a 1 in its free coordinate.
std::vector<QVec> kernel_basis(std::vector<QVec> rows);

}  // namespace mlecone
