#pragma once

// Truncated Fock-space numerics: states, ladder operators, and the special
// matrix elements (two-mode squeezer, beamsplitter, displacement, position
// wavefunctions) consumed by the Kraus synthesis formulas.  All factorials
// and binomials are evaluated in log space; sums run in ascending index order
// so results are bit-stable.

#include "common.hpp"

namespace gkraus {

using FockOperator = Mat;

struct FockState {
  Vec amps;
  double leakage = 0.0;   // 1 - norm^2 for analytically normalized states
  bool leak_warn = false;

  int dim() const { return static_cast<int>(amps.size()); }
};

inline FockState fock_basis_state(int n, int N)
{
  if (n < 0 || n >= N) throw std::invalid_argument("fock level outside truncation");
  FockState st;
  st.amps = Vec::Zero(N);
  st.amps[n] = 1.0;
  return st;
}

// amplitudes e^{-|b|^2/2} b^n / sqrt(n!)
inline FockState coherent_state(cx beta, int N, double warn_tol = 1e-8)
{
  if (N < 1) throw std::invalid_argument("N must be positive");
  FockState st;
  st.amps = Vec::Zero(N);
  double ab = std::abs(beta);
  if (ab == 0.0) {
    st.amps[0] = 1.0;
    return st;
  }
  double phase = std::arg(beta);
  for (int n = 0; n < N; ++n) {
    double lm = -0.5 * ab * ab + n * std::log(ab) - 0.5 * log_factorial(n);
    st.amps[n] = std::polar(std::exp(lm), n * phase);
  }
  st.leakage = std::max(0.0, 1.0 - st.amps.squaredNorm());
  st.leak_warn = st.leakage > warn_tol;
  return st;
}

// diagonal (1-x^2) x^{2n}, x = sqrt((nu-1)/(nu+1)); trace = 1 - x^{2N}
inline FockOperator thermal_state(double nu, int N)
{
  if (nu < 1) throw std::invalid_argument("nu must be >= 1");
  Mat rho = Mat::Zero(N, N);
  double x2 = (nu - 1.0) / (nu + 1.0);
  for (int n = 0; n < N; ++n) rho(n, n) = (1.0 - x2) * std::pow(x2, n);
  return rho;
}

inline Mat annihilation_op(int N)
{
  Mat a = Mat::Zero(N, N);
  for (int n = 1; n < N; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

inline Mat q_op(int N)
{
  Mat a = annihilation_op(N);
  return (a + a.adjoint()) / std::sqrt(2.0);
}

inline Mat p_op(int N)
{
  Mat a = annihilation_op(N);
  return (a - a.adjoint()) * cx(0, -1.0 / std::sqrt(2.0));
}

// <m1,m2| U_S[mu]^dag |n1,n2> for U_S[mu]^dag = exp(mu(a^dag b^dag - a b)),
// nonzero on the ladder m2 - m1 = n2 - n1:
//   sum_r [n1!(n2+m1-n1)!/(n2! m1!)]^{1/2} C(n2,r) C(m1,n1-r) (-1)^r
//         sech^{n1+n2-2r+1}mu tanh^{2r+m1-n1}mu,
// r from max(0,n1-m1) to min(n1,n2).
inline double tms_matrix_element(double mu, int m1, int m2, int n1, int n2)
{
  if (m1 < 0 || m2 < 0 || n1 < 0 || n2 < 0)
    throw std::invalid_argument("negative Fock index");
  if (m2 - m1 != n2 - n1) return 0.0;
  double th = std::tanh(mu), sh = 1.0 / std::cosh(mu);
  double lpre = 0.5 * (log_factorial(n1) + log_factorial(n2 + m1 - n1) -
                       log_factorial(n2) - log_factorial(m1));
  double sum = 0.0;
  int rlo = std::max(0, n1 - m1), rhi = std::min(n1, n2);
  for (int r = rlo; r <= rhi; ++r) {
    double mag = std::exp(lpre + log_binom(n2, r) + log_binom(m1, n1 - r));
    double term = mag * std::pow(sh, n1 + n2 - 2 * r + 1) * std::pow(th, 2 * r + m1 - n1);
    sum += (r % 2 == 0) ? term : -term;
  }
  return sum;
}

// <m1,m2| U_S[theta]^dag |n1,n2> of the beamsplitter, nonzero on the shell
// m1 + m2 = n1 + n2:
//   sum_r [(n1+n2-m2)! m2!/(n1! n2!)]^{1/2} C(n1,r) C(n2,m2-r) (-1)^r
//         sin^{2r+n2-m2}theta cos^{n1+m2-2r}theta,
// r from max(0,m2-n2) to min(n1,m2).  For n2=0 this reduces to the binomial
// row sqrt(C(n,m)) (-sin)^m cos^{n-m}.
inline double bs_matrix_element(double theta, int m1, int m2, int n1, int n2)
{
  if (m1 < 0 || m2 < 0 || n1 < 0 || n2 < 0)
    throw std::invalid_argument("negative Fock index");
  if (m1 + m2 != n1 + n2) return 0.0;
  double sn = std::sin(theta), cs = std::cos(theta);
  double lpre = 0.5 * (log_factorial(n1 + n2 - m2) + log_factorial(m2) -
                       log_factorial(n1) - log_factorial(n2));
  double sum = 0.0;
  int rlo = std::max(0, m2 - n2), rhi = std::min(n1, m2);
  for (int r = rlo; r <= rhi; ++r) {
    double mag = std::exp(lpre + log_binom(n1, r) + log_binom(n2, m2 - r));
    double term = mag * std::pow(sn, 2 * r + n2 - m2) * std::pow(cs, n1 + m2 - 2 * r);
    sum += (r % 2 == 0) ? term : -term;
  }
  return sum;
}

// <m|D(beta)|n> = sqrt(n!/m!) beta^{m-n} e^{-|b|^2/2} L_n^{(m-n)}(|b|^2), m >= n
inline Mat displacement_operator(cx beta, int N)
{
  if (N < 1) throw std::invalid_argument("N must be positive");
  Mat D(N, N);
  double x = std::norm(beta);
  double e = std::exp(-0.5 * x);
  for (int d = 0; d < N; ++d) {
    // generalized Laguerre L_k^{(d)}(x) by upward recurrence in the degree k
    double Lm1 = 0.0, L = 1.0;
    for (int n = 0; n + d < N; ++n) {
      if (n > 0) {
        double Lp = ((2 * n - 1 + d - x) * L - (n - 1 + d) * Lm1) / n;
        Lm1 = L;
        L = Lp;
      }
      double pre = e * std::exp(0.5 * (log_factorial(n) - log_factorial(n + d)));
      D(n + d, n) = pre * std::pow(beta, d) * L;
      if (d > 0) D(n, n + d) = pre * std::pow(-std::conj(beta), d) * L;
    }
  }
  return D;
}

// Hermite functions psi_0..psi_{N-1} at x (stable normalized recurrence)
inline RVec position_wavefunctions(int N, double x)
{
  RVec psi(N);
  psi[0] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
  if (N > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n + 1 < N; ++n)
    psi[n + 1] = x * std::sqrt(2.0 / (n + 1)) * psi[n] -
                 std::sqrt(double(n) / (n + 1)) * psi[n - 1];
  return psi;
}

// <x|n> = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x^2/2}
inline double position_amplitude(int n, double x)
{
  if (n < 0) throw std::invalid_argument("negative Fock index");
  return position_wavefunctions(n + 1, x)[n];
}

}  // namespace gkraus
