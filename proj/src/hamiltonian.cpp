#include "dressq/hamiltonian.hpp"

#include <cmath>
#include <string>

namespace dressq {

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

void TruncationScheme::validate() const {
  if (n0 < 1 || m0 < 1)
    throw ValidationError("truncation cutoffs must satisfy n0 >= 1 and m0 >= 1 (got n0=" +
                          std::to_string(n0) + ", m0=" + std::to_string(m0) + ")");
}

HamiltonianBlocks::HamiltonianBlocks(const NormalModeBasis& basis, const TruncationScheme& trunc,
                                     SineConvention convention)
    : trunc_(trunc), f_R_(basis.f_R()), f_Q_(basis.f_Q()) {
  trunc_.validate();
  const double x_R = basis.lambda3 * basis.phi_zpf_R;
  const double x_Q = basis.lambda4 * basis.phi_zpf_Q;
  cos_Q_ = cos_matrix(x_Q, trunc_.qubit_dim());
  sin_Q_ = sin_matrix(x_Q, trunc_.qubit_dim(), convention);
  assemble(cos_matrix(x_R, trunc_.readout_dim()),
           sin_matrix(x_R, trunc_.readout_dim(), convention));
}

HamiltonianBlocks HamiltonianBlocks::from_operators(double f_R, double f_Q,
                                                    const OperatorMatrix& cos_R,
                                                    const OperatorMatrix& sin_R,
                                                    const OperatorMatrix& cos_Q,
                                                    const OperatorMatrix& sin_Q) {
  auto square = [](const OperatorMatrix& m) { return m.rows() == m.cols() && m.rows() > 0; };
  if (!square(cos_R) || !square(sin_R) || !square(cos_Q) || !square(sin_Q))
    throw ValidationError("dimension mismatch: operator matrices must be square and non-empty");
  if (cos_R.rows() != sin_R.rows() || cos_Q.rows() != sin_Q.rows())
    throw ValidationError("dimension mismatch: cos/sin operator pairs differ in size");

  HamiltonianBlocks h;
  h.trunc_ = {static_cast<int>(cos_R.rows()) - 1, static_cast<int>(cos_Q.rows()) - 1};
  h.trunc_.validate();
  h.f_R_ = f_R;
  h.f_Q_ = f_Q;
  h.cos_Q_ = cos_Q;
  h.sin_Q_ = sin_Q;
  h.assemble(cos_R, sin_R);
  return h;
}

void HamiltonianBlocks::assemble(const OperatorMatrix& cos_R, const OperatorMatrix& sin_R) {
  const int nr = trunc_.readout_dim();
  const int nq = trunc_.qubit_dim();
  diag_.resize(trunc_.total_dim());
  for (int n = 0; n < nr; ++n)
    for (int m = 0; m < nq; ++m) diag_(trunc_.index(n, m)) = f_R_ * n + f_Q_ * m;
  even_ = kron(cos_R, cos_Q_) + kron(sin_R, sin_Q_);
  odd_ = kron(cos_R, sin_Q_) - kron(sin_R, cos_Q_);
}

Eigen::MatrixXd HamiltonianBlocks::hamiltonian(double E_J, FluxPoint flux) const {
  const double c = std::cos(flux.phase());
  const double s = std::sin(flux.phase());
  Eigen::MatrixXd h = (-E_J * c) * even_ + (-E_J * s) * odd_;
  h.diagonal() += diag_;
  return h;
}

Eigen::MatrixXd HamiltonianBlocks::qubit_block(double E_J, FluxPoint flux) const {
  const double c = std::cos(flux.phase());
  const double s = std::sin(flux.phase());
  Eigen::MatrixXd q = (-E_J * c) * cos_Q_ + (-E_J * s) * sin_Q_;
  for (int m = 0; m < trunc_.qubit_dim(); ++m) q(m, m) += f_Q_ * m;
  return q;
}

Eigen::MatrixXd HamiltonianBlocks::decoupled(double E_J, FluxPoint flux) const {
  const int nq = trunc_.qubit_dim();
  const Eigen::MatrixXd q = qubit_block(E_J, flux);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(trunc_.total_dim(), trunc_.total_dim());
  for (int n = 0; n < trunc_.readout_dim(); ++n) {
    auto blk = h.block(n * nq, n * nq, nq, nq);
    blk = q;
    blk.diagonal().array() += f_R_ * n;
  }
  return h;
}

Eigen::MatrixXd build_hamiltonian(const NormalModeBasis& basis, double E_J, FluxPoint flux,
                                  const TruncationScheme& trunc) {
  return HamiltonianBlocks(basis, trunc).hamiltonian(E_J, flux);
}

Eigen::MatrixXd build_decoupled(const NormalModeBasis& basis, double E_J, FluxPoint flux,
                                const TruncationScheme& trunc) {
  return HamiltonianBlocks(basis, trunc).decoupled(E_J, flux);
}

Eigensystem diagonalize(const Eigen::MatrixXd& H, bool compute_vectors) {
  if (H.rows() != H.cols()) throw ValidationError("diagonalize: matrix is not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      H, compute_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigensolver did not converge (dim " + std::to_string(H.rows()) +
                         ", QR iteration limit " +
                         std::to_string(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>::m_maxIterations) +
                         " sweeps per eigenvalue)");
  Eigensystem es;
  es.values = solver.eigenvalues();
  if (compute_vectors) es.vectors = solver.eigenvectors();
  return es;
}

}  // namespace dressq
