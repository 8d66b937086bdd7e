#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gkraus {

using cx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline double log_factorial(int n) { return std::lgamma(n + 1.0); }

inline double log_binom(int n, int k)
{
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

// sqrt(C(n,k)) evaluated in log space; indices up to a few hundred stay finite.
inline double sqrt_binom(int n, int k)
{
  if (k < 0 || k > n) return 0.0;
  return std::exp(0.5 * log_binom(n, k));
}

inline double max_abs(const Mat& m)
{
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

inline double max_abs(const RMat& m)
{
  return m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
}

// max |entry| over the leading j_cut x j_cut block
inline double max_abs_block(const Mat& m, int j_cut)
{
  int k = std::min<int>(j_cut, std::min<int>(m.rows(), m.cols()));
  if (k <= 0) return 0.0;
  return m.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

// Uniform grid on [-x_max, x_max]; weight per sample is the step (measure dx).
struct Grid1D {
  double x_max = 8.0;
  double step = 0.05;

  std::vector<double> points() const
  {
    int half = static_cast<int>(std::llround(x_max / step));
    std::vector<double> xs;
    xs.reserve(2 * half + 1);
    for (int k = -half; k <= half; ++k) xs.push_back(k * step);
    return xs;
  }
};

// Uniform Cartesian grid on the square |Re beta|, |Im beta| <= beta_max;
// weight per sample is step^2/pi (measure d^2beta/pi).  The lattice-aligned
// boundary keeps the angular symmetry of coherent-state integrals that a
// jagged circular cutoff would break.
struct Grid2D {
  double beta_max = 6.0;
  double step = 0.15;

  std::vector<cx> points() const
  {
    int half = static_cast<int>(std::llround(beta_max / step));
    std::vector<cx> bs;
    bs.reserve((2 * half + 1) * (2 * half + 1));
    for (int i = -half; i <= half; ++i)
      for (int j = -half; j <= half; ++j) bs.push_back(cx(i * step, j * step));
    return bs;
  }

  double weight() const { return step * step / M_PI; }
};

}  // namespace gkraus
