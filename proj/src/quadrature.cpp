#include "hardy/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <sstream>
#include <tuple>

#include "hardy/error.hpp"

namespace hardy {

GaussRule gauss_jacobi(std::size_t n, double a, double b) {
  if (n == 0 || !(a > -1.0) || !(b > -1.0)) {
    std::ostringstream msg;
    msg << "Gauss-Jacobi rule needs n > 0 and exponents > -1 (a=" << a
        << ", b=" << b << ")";
    throw Error(ErrorCode::NonIntegrable, msg.str());
  }
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(nn);
  Eigen::VectorXd sub(std::max<Eigen::Index>(nn - 1, 0));
  const double ab = a + b;
  for (Eigen::Index k = 0; k < nn; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    diag(k) = (k == 0) ? (b - a) / (ab + 2.0) : (b * b - a * a) / (s * (s + 2.0));
  }
  for (Eigen::Index k = 1; k < nn; ++k) {
    const double kk = static_cast<double>(k);
    const double s = 2.0 * kk + ab;
    double beta2;
    if (k == 1) {
      // closed form avoids 0/0 when a + b = -1
      beta2 = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta2 = 4.0 * kk * (kk + a) * (kk + b) * (kk + ab) /
              (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(beta2);
  }
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                              std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  if (n == 1) {
    rule.nodes[0] = diag(0);
    rule.weights[0] = mu0;
    return rule;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  for (Eigen::Index k = 0; k < nn; ++k) {
    rule.nodes[static_cast<std::size_t>(k)] = eig.eigenvalues()(k);
    const double v0 = eig.eigenvectors()(0, k);
    rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
  }
  return rule;
}

const GaussRule& cached_gauss_jacobi(std::size_t n, double a, double b) {
  static std::mutex mutex;
  static std::map<std::tuple<std::size_t, double, double>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<GaussRule>(gauss_jacobi(n, a, b));
  return *slot;
}

namespace {

// Kronrod 15-point extension of the 7-point Gauss rule (QUADPACK qk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                  double b, double rel_tol, double abs_tol,
                                  std::size_t max_intervals) {
  std::priority_queue<Panel> panels;
  Panel first = kronrod15(f, a, b);
  double total = first.value;
  double error = first.error;
  panels.push(first);
  while (error > std::max(rel_tol * std::abs(total), abs_tol)) {
    if (panels.size() >= max_intervals) {
      std::ostringstream msg;
      msg << "adaptive quadrature on [" << a << ", " << b
          << "] did not reach tolerance " << rel_tol << " (error estimate "
          << error << ")";
      throw Error(ErrorCode::QuadratureFailure, msg.str());
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = kronrod15(f, worst.a, mid);
    const Panel right = kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }
  // resum to shed accumulated cancellation from the running updates
  double value = 0.0;
  double err = 0.0;
  const std::size_t count = panels.size();
  while (!panels.empty()) {
    value += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {value, err, count};
}

}  // namespace hardy
