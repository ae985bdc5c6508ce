#include "dressq/oscillator_ops.hpp"

#include <cmath>

namespace dressq {

double laguerre(int k, int a, double x) {
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

namespace {

// sqrt(k!/l!) x^(l-k) e^{-x^2/2} L_k^(l-k)(x^2) for k <= l, without
// forming either factorial.
double displacement_magnitude(int k, int l, double x) {
  double pref = 1.0;
  for (int j = k + 1; j <= l; ++j) pref *= x / std::sqrt(static_cast<double>(j));
  return pref * std::exp(-0.5 * x * x) * laguerre(k, l - k, x * x);
}

}  // namespace

OperatorMatrix cos_matrix(double x, int dim) {
  OperatorMatrix m = OperatorMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = k; l < dim; l += 2) {
      const int half = (l - k) / 2;
      const double sign = (half % 2 == 0) ? 1.0 : -1.0;
      const double v = sign * displacement_magnitude(k, l, x);
      m(k, l) = v;
      m(l, k) = v;
    }
  }
  return m;
}

OperatorMatrix sin_matrix(double x, int dim, SineConvention convention) {
  OperatorMatrix m = OperatorMatrix::Zero(dim, dim);
  const double flip = convention == SineConvention::Tabulated ? 1.0 : -1.0;
  for (int k = 0; k < dim; ++k) {
    for (int l = k + 1; l < dim; l += 2) {
      const int half = (l - k + 1) / 2;
      const double sign = (half % 2 == 0) ? 1.0 : -1.0;
      const double v = flip * sign * displacement_magnitude(k, l, x);
      m(k, l) = v;
      m(l, k) = v;
    }
  }
  return m;
}

OperatorMatrix phase_matrix(double phi_zpf, int dim) {
  OperatorMatrix m = OperatorMatrix::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) {
    const double v = phi_zpf * std::sqrt(k + 1.0);
    m(k, k + 1) = v;
    m(k + 1, k) = v;
  }
  return m;
}

OperatorMatrix charge_matrix_imag(double phi_zpf, int dim) {
  OperatorMatrix m = OperatorMatrix::Zero(dim, dim);
  const double n_zpf = 1.0 / (2.0 * phi_zpf);
  for (int k = 0; k + 1 < dim; ++k) {
    const double v = n_zpf * std::sqrt(k + 1.0);
    m(k + 1, k) = v;   // a^dag
    m(k, k + 1) = -v;  // -a
  }
  return m;
}

}  // namespace dressq
