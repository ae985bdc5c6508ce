#pragma once

// Closed-form single-mode operator matrices in the Fock basis.

#include <Eigen/Dense>

namespace dressq {

/// Dense real matrix with entry (k, l) = <k|O|l>.
using OperatorMatrix = Eigen::MatrixXd;

/// Sign convention of the sine matrix.
///
/// Tabulated uses (-1)^((l-k+1)/2) for k <= l, as in the closed-form
/// tables for <k|sin(x phi)|l>. Ladder is the sign obtained by expanding
/// sin(x (a + a^dag)) directly; it is the negative of Tabulated. The two are
/// related by the single-mode parity operator and give identical spectra.
enum class SineConvention { Tabulated, Ladder };

/// Associated Laguerre polynomial L_k^a(x) by upward three-term recurrence.
double laguerre(int k, int a, double x);

/// <k|cos(x phi_hat / phi_zpf)|l> with x = lambda * phi_zpf.
OperatorMatrix cos_matrix(double x, int dim);

/// <k|sin(x phi_hat / phi_zpf)|l>, signed per `convention`.
OperatorMatrix sin_matrix(double x, int dim, SineConvention convention = SineConvention::Tabulated);

/// phi_hat = phi_zpf (a + a^dag): tridiagonal, (k, k+1) = phi_zpf sqrt(k+1).
OperatorMatrix phase_matrix(double phi_zpf, int dim);

/// Conjugate charge n_hat = i (a^dag - a) / (2 phi_zpf), so that
/// [phi_hat, n_hat] = i on the untruncated space. Entries are purely
/// imaginary; this returns the real matrix M with n_hat = i M.
OperatorMatrix charge_matrix_imag(double phi_zpf, int dim);

}  // namespace dressq
