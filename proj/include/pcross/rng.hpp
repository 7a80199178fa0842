#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace pcross {

/// Seeded generator with platform-independent sampling. The std::
/// distributions are implementation-defined, so uniform/normal variates are
/// derived from raw mt19937_64 output directly; identical seeds give
/// identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  /// Uniform in [0,1) with 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  std::complex<double> complex_normal() {
    return {normal() * M_SQRT1_2, normal() * M_SQRT1_2};
  }

  Eigen::MatrixXcd gaussian_matrix(int rows, int cols) {
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = complex_normal();
    return m;
  }

  /// Haar-distributed unitary via phase-fixed QR of a Ginibre matrix.
  Eigen::MatrixXcd unitary(int n) {
    const Eigen::MatrixXcd g = gaussian_matrix(n, n);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
      const std::complex<double> d = r(j, j);
      const std::complex<double> phase =
          std::abs(d) > 0 ? d / std::abs(d) : std::complex<double>(1, 0);
      q.col(j) *= phase;
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pcross
