#pragma once

#include <Eigen/Dense>
#include <complex>

#include "metrogain/bath.hpp"

namespace metrogain {

// Brute-force density matrices are 2^n x 2^n; above this the oracle is not
// worth running.
inline constexpr int kMaxBruteForceQubits = 12;

enum class ProbeKind { Separable, Ghz };

std::string_view to_string(ProbeKind kind) noexcept;

struct ProbeSpec {
  int n = 1;
  ProbeKind kind = ProbeKind::Separable;
};

struct EvolutionParams {
  double omega = 0.0;  // rad/s, the frequency being estimated
  double tau = 0.0;    // sensing time
};

using ComplexMatrix = Eigen::MatrixXcd;

// Hermitian, unit-trace matrix on n qubits. Basis index bit i is qubit i,
// bit value 0 is |0> (sigma_z = +1).
class DensityMatrix {
 public:
  static constexpr double kHermitianTol = 1e-12;
  static constexpr double kTraceTol = 1e-12;

  // Throws ValidationError if the matrix is not square with power-of-two
  // dimension, not Hermitian, or not unit-trace.
  explicit DensityMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }
  int num_qubits() const noexcept { return qubits_; }
  std::complex<double> operator()(Eigen::Index row, Eigen::Index col) const { return m_(row, col); }

  std::complex<double> trace() const { return m_.trace(); }
  double purity() const;
  double min_eigenvalue() const;

 private:
  ComplexMatrix m_;
  int qubits_ = 0;
};

DensityMatrix build_probe_state(const ProbeSpec& spec);

/// Independent dephasing Lambda^{(x)n} with decay exponent gamma_value:
/// rho_ab -> e^{-gamma_value * hamming(a, b)} rho_ab.
DensityMatrix apply_dephasing(const DensityMatrix& rho, double gamma_value);

/// rho -> U rho U^dagger with U = exp(-i tau omega J_z), J_z = sum sigma_z / 2.
DensityMatrix evolve_phase(const DensityMatrix& rho, const EvolutionParams& params);

/// d rho_omega / d omega = -i tau [J_z, rho_omega].
ComplexMatrix rho_derivative(const DensityMatrix& rho_omega, double tau);

/// Quantum Fisher information from the spectral decomposition of rho_omega,
/// 2 sum_{i,j} |<phi_j| drho |phi_i>|^2 / (lambda_i + lambda_j), skipping pairs
/// with lambda_i + lambda_j <= rank_tol.
double qfi_eigen(const DensityMatrix& rho_omega, const ComplexMatrix& drho, double rank_tol = 1e-12);

/// Prepared state after dephasing and phase accumulation for a time params.tau.
DensityMatrix sensing_state(const ProbeSpec& spec, const BathModel& model, const EvolutionParams& params);

/// qfi_eigen applied to sensing_state; the reference the closed forms are checked against.
double qfi_brute_force(const ProbeSpec& spec, const BathModel& model, double tau, double omega = 0.0);

/// N tau^2 e^{-2 Gamma(tau)}
double qfi_separable(int n, double tau, const BathModel& model);

/// N^2 tau^2 e^{-2 N Gamma(tau)}
double qfi_ghz(int n, double tau, const BathModel& model);

double qfi_closed_form(ProbeKind kind, int n, double tau, const BathModel& model);

}  // namespace metrogain
