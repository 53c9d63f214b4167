#include "mlecone/linalg.hpp"

#include <cstdlib>
#include <utility>

namespace mlecone {

namespace {

// Bareiss over __int128. Returns rank, or -1 on overflow.
int rank_i128(const std::vector<std::vector<long long>>& in) {
  const std::size_t m = in.size();
  if (m == 0) return 0;
  const std::size_t n = in[0].size();
  std::vector<std::vector<__int128>> a(m, std::vector<__int128>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = in[i][j];

  __int128 prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t i = row + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        __int128 t1, t2;
        if (__builtin_mul_overflow(a[row][col], a[i][j], &t1)) return -1;
        if (__builtin_mul_overflow(a[i][col], a[row][j], &t2)) return -1;
        if (__builtin_sub_overflow(t1, t2, &t1)) return -1;
        a[i][j] = t1 / prev;  // exact by Bareiss
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return static_cast<int>(row);
}

}  // namespace

int exact_rank_big(std::vector<ZVec> a) {
  const std::size_t m = a.size();
  if (m == 0) return 0;
  const std::size_t n = a[0].size();
  Integer prev = 1;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t i = row + 1; i < m; ++i) {
      for (std::size_t j = col + 1; j < n; ++j) {
        Integer t = a[row][col] * a[i][j] - a[i][col] * a[row][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][col] = 0;
    }
    prev = a[row][col];
    ++row;
  }
  return static_cast<int>(row);
}

int exact_rank(const std::vector<std::vector<long long>>& rows) {
  int r = rank_i128(rows);
  if (r >= 0) return r;
  std::vector<ZVec> big(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    big[i].resize(rows[i].size());
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      big[i][j] = to_integer(rows[i][j]);
  }
  return exact_rank_big(std::move(big));
}

std::vector<QVec> kernel_basis(std::vector<QVec> a) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m; ++col) {
    std::size_t piv = row;
    while (piv < m && a[piv][col] == 0) ++piv;
    if (piv == m) continue;
    std::swap(a[piv], a[row]);
    Rational d = a[row][col];
    for (std::size_t j = col; j < n; ++j) a[row][j] /= d;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rational f = a[i][col];
      for (std::size_t j = col; j < n; ++j) a[i][j] -= f * a[row][j];
    }
    pivot_col.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  std::vector<QVec> basis;
  for (std::size_t free_col = 0; free_col < n; ++free_col) {
    if (is_pivot[free_col]) continue;
    QVec v(n, Rational(0));
    v[free_col] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r)
      v[pivot_col[r]] = -a[r][free_col];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace mlecone
