#pragma once

// Reference constructions used only by tests. They build the full operators
// explicitly so they share no code path with the library's elementwise forms.

#include <Eigen/Dense>
#include <complex>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using Mat = Eigen::MatrixXcd;

// I (x) ... (x) op (x) ... (x) I with op on qubit `target`; qubit i is bit i
// of the basis index, so qubit 0 is the rightmost Kronecker factor.
inline Mat embed(const Mat& op, int target, int n) {
  Mat out = Mat::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    const Mat factor = q == target ? op : Mat::Identity(2, 2);
    Mat next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
      for (Eigen::Index j = 0; j < out.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = out(i, j) * factor;
    out = next;
  }
  return out;
}

inline Mat sigma_z() {
  Mat z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

// Per-qubit two-Kraus dephasing applied one qubit at a time.
inline Mat sequential_dephasing(Mat rho, double gamma_value, int n) {
  const double p_keep = 0.5 * (1.0 + std::exp(-gamma_value));
  const double p_flip = 0.5 * (1.0 - std::exp(-gamma_value));
  for (int q = 0; q < n; ++q) {
    const Mat z = embed(sigma_z(), q, n);
    rho = p_keep * rho + p_flip * z * rho * z;
  }
  return rho;
}

// exp(-i tau H) with H = (omega / 2) sum sigma_z, through Eigen's general
// matrix exponential.
inline Mat phase_unitary(double omega, double tau, int n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Mat h = Mat::Zero(dim, dim);
  for (int q = 0; q < n; ++q) h += 0.5 * omega * embed(sigma_z(), q, n);
  const Mat generator = std::complex<double>(0.0, -tau) * h;
  return generator.exp();
}

}  // namespace oracle
