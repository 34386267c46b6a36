#pragma once

#include <cstddef>
#include <vector>

namespace hardy {

/// Symmetric tridiagonal matrix: diag has n entries, off has n - 1.
struct SymTridiagonal {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }
  std::vector<double> multiply(const std::vector<double>& x) const;
  double quadratic(const std::vector<double>& x) const;
  double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;
};

/// a * A + b * B.
SymTridiagonal combine(const SymTridiagonal& A, double a, const SymTridiagonal& B, double b);

/// D T D for a diagonal D.
SymTridiagonal scale_sym(const SymTridiagonal& T, const std::vector<double>& d);

/// Unpivoted L D L^T of a symmetric tridiagonal matrix.  Zero pivots are
/// nudged to a tiny value in the usual Sturm-count convention, so the
/// factorization always exists and the number of negative pivots equals
/// the number of negative eigenvalues.
struct LdlFactor {
  std::vector<double> pivots;
  std::vector<double> lower;
  std::size_t negative_pivots = 0;

  std::vector<double> solve(const std::vector<double>& rhs) const;
};

LdlFactor ldl(const SymTridiagonal& T);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

}  // namespace hardy
