#pragma once

#include <Eigen/Dense>

#include "dressq/normal_modes.hpp"
#include "dressq/oscillator_ops.hpp"
#include "dressq/params.hpp"

namespace dressq {

/// Fock cutoffs (inclusive): readout n <= n0, qubit m <= m0.
struct TruncationScheme {
  int n0 = 5;
  int m0 = 20;

  int readout_dim() const { return n0 + 1; }
  int qubit_dim() const { return m0 + 1; }
  int total_dim() const { return readout_dim() * qubit_dim(); }
  /// Product-basis index of |n m>.
  int index(int n, int m) const { return n * qubit_dim() + m; }
  void validate() const;
};

/// Flux-independent pieces of the dressed-basis Hamiltonian for one
/// parameter set:
///
///   H(phi) = D - E_J [cos(phi) K_even + sin(phi) K_odd]
///   D      = diag(f_R n + f_Q m)
///   K_even = C^R (x) C^Q + S^R (x) S^Q
///   K_odd  = C^R (x) S^Q - S^R (x) C^Q
///
/// Building H at a new flux point is two scalar multiplies and an add, so a
/// sweep reuses one instance. Energies in GHz.
class HamiltonianBlocks {
 public:
  HamiltonianBlocks(const NormalModeBasis& basis, const TruncationScheme& trunc,
                    SineConvention convention = SineConvention::Tabulated);

  /// Builds from explicit single-mode operator matrices. Throws
  /// ValidationError if any matrix is not square or the readout/qubit pairs
  /// disagree in dimension.
  static HamiltonianBlocks from_operators(double f_R, double f_Q, const OperatorMatrix& cos_R,
                                          const OperatorMatrix& sin_R, const OperatorMatrix& cos_Q,
                                          const OperatorMatrix& sin_Q);

  Eigen::MatrixXd hamiltonian(double E_J, FluxPoint flux) const;

  /// c^R -> 1, s^R -> 0: block diagonal in n, one qubit block per n.
  Eigen::MatrixXd decoupled(double E_J, FluxPoint flux) const;

  /// The (m0+1)-dimensional qubit block shared by every n of `decoupled`.
  Eigen::MatrixXd qubit_block(double E_J, FluxPoint flux) const;

  const TruncationScheme& truncation() const { return trunc_; }
  double f_R() const { return f_R_; }
  double f_Q() const { return f_Q_; }
  const OperatorMatrix& cos_Q() const { return cos_Q_; }
  const OperatorMatrix& sin_Q() const { return sin_Q_; }

 private:
  HamiltonianBlocks() = default;
  void assemble(const OperatorMatrix& cos_R, const OperatorMatrix& sin_R);

  TruncationScheme trunc_;
  double f_R_ = 0.0;
  double f_Q_ = 0.0;
  Eigen::VectorXd diag_;
  Eigen::MatrixXd even_;
  Eigen::MatrixXd odd_;
  OperatorMatrix cos_Q_;
  OperatorMatrix sin_Q_;
};

Eigen::MatrixXd build_hamiltonian(const NormalModeBasis& basis, double E_J, FluxPoint flux,
                                  const TruncationScheme& trunc);
Eigen::MatrixXd build_decoupled(const NormalModeBasis& basis, double E_J, FluxPoint flux,
                                const TruncationScheme& trunc);

struct Eigensystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal; empty if not requested
};

/// Dense real-symmetric eigensolver. Throws NumericalError if the iteration
/// does not converge.
Eigensystem diagonalize(const Eigen::MatrixXd& H, bool compute_vectors = true);

}  // namespace dressq
