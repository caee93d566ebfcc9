#include "metrogain/qfi.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "metrogain/error.hpp"

namespace metrogain {
namespace {

using Index = Eigen::Index;

// Sum of sigma_z eigenvalues for basis state a: (#zeros - #ones).
double magnetization(Index a, int n) {
  return static_cast<double>(n - 2 * std::popcount(static_cast<unsigned long long>(a)));
}

int qubit_count(Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<unsigned long long>(dim))) {
    throw ValidationError("density matrix dimension must be a power of two >= 2, got " +
                          std::to_string(dim));
  }
  return std::countr_zero(static_cast<unsigned long long>(dim));
}

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_qubits(int n) {
  if (n < 1) throw DomainError("particle count must be >= 1, got " + std::to_string(n));
  if (n > kMaxBruteForceQubits) {
    throw CapacityError("brute-force path supports at most " + std::to_string(kMaxBruteForceQubits) +
                        " qubits, got " + std::to_string(n));
  }
}

void require_count(int n) {
  if (n < 1) throw DomainError("particle count must be >= 1, got " + std::to_string(n));
}

}  // namespace

std::string_view to_string(ProbeKind kind) noexcept {
  return kind == ProbeKind::Separable ? "separable" : "ghz";
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("density matrix must be square");
  qubits_ = qubit_count(m_.rows());
  const double asym = max_abs(m_ - m_.adjoint());
  if (asym > kHermitianTol) {
    throw ValidationError("density matrix is not Hermitian (max |rho - rho^dagger| = " +
                          std::to_string(asym) + ")");
  }
  const std::complex<double> tr = m_.trace();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", expected 1");
  }
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix build_probe_state(const ProbeSpec& spec) {
  require_qubits(spec.n);
  const Index dim = Index{1} << spec.n;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  if (spec.kind == ProbeKind::Separable) {
    psi.setConstant(std::pow(0.5, 0.5 * spec.n));
  } else {
    psi(0) = psi(dim - 1) = std::sqrt(0.5);
  }
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix apply_dephasing(const DensityMatrix& rho, double gamma_value) {
  if (!(gamma_value >= 0.0)) {
    throw DomainError("decay exponent must be >= 0, got " + std::to_string(gamma_value));
  }
  ComplexMatrix out = rho.matrix();
  const int n = rho.num_qubits();
  // Precompute e^{-Gamma h} for h = 0..n.
  Eigen::VectorXd factor(n + 1);
  for (int h = 0; h <= n; ++h) factor(h) = std::exp(-gamma_value * h);
  for (Index col = 0; col < out.cols(); ++col) {
    for (Index row = 0; row < out.rows(); ++row) {
      out(row, col) *= factor(std::popcount(static_cast<unsigned long long>(row ^ col)));
    }
  }
  return DensityMatrix(std::move(out));
}

DensityMatrix evolve_phase(const DensityMatrix& rho, const EvolutionParams& params) {
  const int n = rho.num_qubits();
  ComplexMatrix out = rho.matrix();
  for (Index col = 0; col < out.cols(); ++col) {
    for (Index row = 0; row < out.rows(); ++row) {
      const double angle = -0.5 * params.tau * params.omega * (magnetization(row, n) - magnetization(col, n));
      out(row, col) *= std::polar(1.0, angle);
    }
  }
  return DensityMatrix(std::move(out));
}

ComplexMatrix rho_derivative(const DensityMatrix& rho_omega, double tau) {
  const int n = rho_omega.num_qubits();
  ComplexMatrix out = rho_omega.matrix();
  const std::complex<double> minus_i_tau(0.0, -tau);
  for (Index col = 0; col < out.cols(); ++col) {
    for (Index row = 0; row < out.rows(); ++row) {
      // (J_z rho - rho J_z)_{ab} = (m_a - m_b)/2 rho_ab
      out(row, col) *= minus_i_tau * 0.5 * (magnetization(row, n) - magnetization(col, n));
    }
  }
  return out;
}

double qfi_eigen(const DensityMatrix& rho_omega, const ComplexMatrix& drho, double rank_tol) {
  if (!(rank_tol > 0.0)) throw DomainError("rank_tol must be > 0");
  if (drho.rows() != rho_omega.dim() || drho.cols() != rho_omega.dim()) {
    throw ValidationError("d rho / d omega has shape " + std::to_string(drho.rows()) + "x" +
                          std::to_string(drho.cols()) + ", expected " + std::to_string(rho_omega.dim()));
  }
  const double asym = max_abs(drho - drho.adjoint());
  if (asym > DensityMatrix::kHermitianTol * std::max(1.0, max_abs(drho))) {
    throw ValidationError("d rho / d omega is not Hermitian (max asymmetry " + std::to_string(asym) + ")");
  }

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho_omega.matrix());
  if (solver.info() != Eigen::Success) throw SolverError("Hermitian eigendecomposition failed");
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const ComplexMatrix& phi = solver.eigenvectors();
  const ComplexMatrix projected = phi.adjoint() * drho * phi;

  double total = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) {
    for (Index j = 0; j < lambda.size(); ++j) {
      const double denom = lambda(i) + lambda(j);
      if (denom <= rank_tol) continue;
      total += std::norm(projected(j, i)) / denom;
    }
  }
  return 2.0 * total;
}

DensityMatrix sensing_state(const ProbeSpec& spec, const BathModel& model, const EvolutionParams& params) {
  const DensityMatrix prepared = build_probe_state(spec);
  return evolve_phase(apply_dephasing(prepared, decay_exponent(model, params.tau)), params);
}

double qfi_brute_force(const ProbeSpec& spec, const BathModel& model, double tau, double omega) {
  const DensityMatrix rho = sensing_state(spec, model, {omega, tau});
  return qfi_eigen(rho, rho_derivative(rho, tau));
}

double qfi_separable(int n, double tau, const BathModel& model) {
  require_count(n);
  return n * tau * tau * std::exp(-2.0 * decay_exponent(model, tau));
}

double qfi_ghz(int n, double tau, const BathModel& model) {
  require_count(n);
  const double nn = static_cast<double>(n);
  return nn * nn * tau * tau * std::exp(-2.0 * nn * decay_exponent(model, tau));
}

double qfi_closed_form(ProbeKind kind, int n, double tau, const BathModel& model) {
  return kind == ProbeKind::Separable ? qfi_separable(n, tau, model) : qfi_ghz(n, tau, model);
}

}  // namespace metrogain
