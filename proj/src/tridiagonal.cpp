#include "hardy/tridiagonal.hpp"

#include <cmath>
#include <limits>

namespace hardy {

std::vector<double> SymTridiagonal::multiply(const std::vector<double>& x) const {
  const std::size_t n = size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += off[i - 1] * x[i - 1];
    if (i + 1 < n) s += off[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double SymTridiagonal::bilinear(const std::vector<double>& x, const std::vector<double>& y) const {
  const std::size_t n = size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s += diag[i] * x[i] * y[i];
    if (i + 1 < n) s += off[i] * (x[i] * y[i + 1] + x[i + 1] * y[i]);
  }
  return s;
}

double SymTridiagonal::quadratic(const std::vector<double>& x) const { return bilinear(x, x); }

SymTridiagonal combine(const SymTridiagonal& A, double a, const SymTridiagonal& B, double b) {
  SymTridiagonal C;
  C.diag.resize(A.diag.size());
  C.off.resize(A.off.size());
  for (std::size_t i = 0; i < A.diag.size(); ++i) C.diag[i] = a * A.diag[i] + b * B.diag[i];
  for (std::size_t i = 0; i < A.off.size(); ++i) C.off[i] = a * A.off[i] + b * B.off[i];
  return C;
}

SymTridiagonal scale_sym(const SymTridiagonal& T, const std::vector<double>& d) {
  SymTridiagonal C = T;
  for (std::size_t i = 0; i < C.diag.size(); ++i) C.diag[i] *= d[i] * d[i];
  for (std::size_t i = 0; i < C.off.size(); ++i) C.off[i] *= d[i] * d[i + 1];
  return C;
}

LdlFactor ldl(const SymTridiagonal& T) {
  const std::size_t n = T.size();
  LdlFactor f;
  f.pivots.resize(n);
  f.lower.resize(n > 0 ? n - 1 : 0);
  double scale = 0.0;
  for (double v : T.diag) scale = std::max(scale, std::abs(v));
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  for (std::size_t i = 0; i < n; ++i) {
    double d = T.diag[i];
    if (i > 0) d -= f.lower[i - 1] * T.off[i - 1];
    if (d == 0.0) d = tiny;
    f.pivots[i] = d;
    if (d < 0.0) ++f.negative_pivots;
    if (i + 1 < n) f.lower[i] = T.off[i] / d;
  }
  return f;
}

std::vector<double> LdlFactor::solve(const std::vector<double>& rhs) const {
  const std::size_t n = pivots.size();
  std::vector<double> x = rhs;
  if (n == 0) return x;
  for (std::size_t i = 1; i < n; ++i) x[i] -= lower[i - 1] * x[i - 1];
  for (std::size_t i = 0; i < n; ++i) x[i] /= pivots[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= lower[i] * x[i + 1];
  return x;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace hardy
