#ifndef SUBDIFF_TRIDIAGONAL_HPP
#define SUBDIFF_TRIDIAGONAL_HPP

#include <cfloat>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "subdiff/errors.hpp"

namespace subdiff {

// ---------------------------------------------------------------------------
// Tridiagonal matrix in banded storage.
//
// For an m x m matrix: diag has m entries; sub has m-1 entries, sub[i] being
// the coefficient of x[i] in row i+1; super has m-1 entries, super[i] being
// the coefficient of x[i+1] in row i.
// ---------------------------------------------------------------------------
struct TridiagonalOperator {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  std::size_t size() const { return diag.size(); }

  static TridiagonalOperator identity(std::size_t m) {
    TridiagonalOperator op;
    op.sub.assign(m > 0 ? m - 1 : 0, 0.0);
    op.diag.assign(m, 1.0);
    op.super.assign(m > 0 ? m - 1 : 0, 0.0);
    return op;
  }

  // y = M x
  std::vector<double> apply(const std::vector<double>& x) const {
    const std::size_t m = size();
    if (x.size() != m)
      throw DomainError("TridiagonalOperator::apply: size mismatch");
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      double v = diag[i] * x[i];
      if (i > 0) v += sub[i - 1] * x[i - 1];
      if (i + 1 < m) v += super[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }
};

// ---------------------------------------------------------------------------
// Thomas algorithm: forward elimination + back substitution.
//
// Residual on well-conditioned systems stays below 1e-10 * ||rhs||_inf.
// Throws SolverError when a pivot underflows to (near) zero.
// ---------------------------------------------------------------------------
inline std::vector<double> tridiagonal_solve(const TridiagonalOperator& C,
                                             const std::vector<double>& rhs) {
  const std::size_t m = C.size();
  if (rhs.size() != m)
    throw DomainError("tridiagonal_solve: rhs size " + std::to_string(rhs.size()) +
                      " does not match system size " + std::to_string(m));
  if (m == 0) return {};

  std::vector<double> cp(m, 0.0); // modified superdiagonal
  std::vector<double> x(m, 0.0);  // modified rhs, then solution

  double pivot = C.diag[0];
  if (std::fabs(pivot) < DBL_MIN)
    throw SolverError("tridiagonal_solve: zero pivot in row 0");
  cp[0] = (m > 1) ? C.super[0] / pivot : 0.0;
  x[0] = rhs[0] / pivot;

  for (std::size_t i = 1; i < m; ++i) {
    pivot = C.diag[i] - C.sub[i - 1] * cp[i - 1];
    if (std::fabs(pivot) < DBL_MIN)
      throw SolverError("tridiagonal_solve: zero pivot in row " + std::to_string(i));
    if (i + 1 < m) cp[i] = C.super[i] / pivot;
    x[i] = (rhs[i] - C.sub[i - 1] * x[i - 1]) / pivot;
  }

  for (std::size_t i = m - 1; i-- > 0;)
    x[i] -= cp[i] * x[i + 1];

  return x;
}

} // namespace subdiff

#endif // SUBDIFF_TRIDIAGONAL_HPP
