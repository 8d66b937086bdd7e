#pragma once

// Gaussian (phase-space) calculus in hbar-scaled quadratures: vacuum CM = I,
// ordering (q1,p1,q2,p2), Omega = direct sum of [[0,1],[-1,0]].  The channel
// acts on covariance matrices as V -> X^T V X + Y and on means as d -> X^T d;
// some references use X V X^T instead, which coincides for every canonical X
// handled here.

#include "common.hpp"

#include <algorithm>
#include <optional>

namespace gkraus {

inline RMat sigma3()
{
  RMat s(2, 2);
  s << 1, 0, 0, -1;
  return s;
}

inline RMat omega(int dim)
{
  RMat w = RMat::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; k += 2) {
    w(k, k + 1) = 1;
    w(k + 1, k) = -1;
  }
  return w;
}

struct CovMat {
  RMat m;
  RVec mean;

  CovMat() = default;
  explicit CovMat(const RMat& mm) : m(mm), mean(RVec::Zero(mm.rows())) {}
  CovMat(const RMat& mm, const RVec& d) : m(mm), mean(d) {}

  int dim() const { return static_cast<int>(m.rows()); }

  bool is_symmetric(double tol = 1e-10) const
  {
    return max_abs(RMat(m - m.transpose())) <= tol;
  }
};

enum class Family { C1, C2, D, A1, A2, B1, B2 };

inline std::string family_name(Family f)
{
  switch (f) {
    case Family::C1: return "C1";
    case Family::C2: return "C2";
    case Family::D: return "D";
    case Family::A1: return "A1";
    case Family::A2: return "A2";
    case Family::B1: return "B1";
    case Family::B2: return "B2";
  }
  throw std::logic_error("bad family tag");
}

inline std::optional<Family> family_from_name(const std::string& s)
{
  if (s == "C1") return Family::C1;
  if (s == "C2") return Family::C2;
  if (s == "D") return Family::D;
  if (s == "A1") return Family::A1;
  if (s == "A2") return Family::A2;
  if (s == "B1") return Family::B1;
  if (s == "B2") return Family::B2;
  return std::nullopt;
}

inline bool family_uses_kappa(Family f)
{
  return f == Family::C1 || f == Family::C2 || f == Family::D;
}

// Canonical (X, Y) pair: C1/C2 -> X = kappa I; D -> X = kappa sigma3;
// A1 -> X = 0; A2 -> X = (I+sigma3)/2; B1 -> X = I, Y = alpha (I+sigma3)/2;
// B2 -> X = I, Y = alpha I.
struct GaussianChannel {
  Family family = Family::C1;
  double kappa = 1.0;  // ignored for A1, A2, B1, B2
  double alpha = 0.0;

  RMat X() const
  {
    switch (family) {
      case Family::C1:
      case Family::C2: return kappa * RMat::Identity(2, 2);
      case Family::D: return kappa * sigma3();
      case Family::A1: return RMat::Zero(2, 2);
      case Family::A2: {
        RMat x = RMat::Zero(2, 2);
        x(0, 0) = 1;
        return x;
      }
      case Family::B1:
      case Family::B2: return RMat::Identity(2, 2);
    }
    throw std::logic_error("bad family tag");
  }

  RMat Y() const
  {
    if (family == Family::B1) {
      RMat y = RMat::Zero(2, 2);
      y(0, 0) = alpha;
      return y;
    }
    return alpha * RMat::Identity(2, 2);
  }
};

inline GaussianChannel make_channel(Family f, double kappa, double alpha)
{
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  switch (f) {
    case Family::C1:
      if (!(kappa > 0 && kappa <= 1)) throw std::invalid_argument("C1 needs 0 < kappa <= 1");
      break;
    case Family::C2:
      if (!(kappa >= 1)) throw std::invalid_argument("C2 needs kappa >= 1");
      break;
    case Family::D:
      if (!(kappa > 0)) throw std::invalid_argument("D needs kappa > 0");
      break;
    default:
      kappa = family_uses_kappa(f) ? kappa : 0.0;
      break;
  }
  return GaussianChannel{f, kappa, alpha};
}

inline double quantum_limited_alpha(Family f, double kappa)
{
  switch (f) {
    case Family::C1:
    case Family::C2: return std::abs(kappa * kappa - 1.0);
    case Family::D: return kappa * kappa + 1.0;
    case Family::A1:
    case Family::A2: return 1.0;
    case Family::B1:
    case Family::B2: return 0.0;
  }
  throw std::logic_error("bad family tag");
}

// two-mode squeezed vacuum: diagonal blocks cosh2r I, off-diagonal sinh2r sigma3
inline CovMat tmsv_cm(double r)
{
  if (r < 0) throw std::invalid_argument("r must be nonnegative");
  double c = std::cosh(2 * r), s = std::sinh(2 * r);
  RMat v(4, 4);
  v << c, 0, s, 0,
       0, c, 0, -s,
       s, 0, c, 0,
       0, -s, 0, c;
  return CovMat(v);
}

// Moduli of the eigenvalues of i Omega V, evaluated through the antisymmetric
// matrix V^{1/2} Omega V^{1/2} whose singular values are the same moduli; this
// stays accurate when V is stiff (large cosh 2r).
inline std::vector<double> symplectic_eigenvalues(const CovMat& V)
{
  if (!V.is_symmetric()) throw std::invalid_argument("covariance matrix not symmetric");
  int d = V.dim();
  Eigen::SelfAdjointEigenSolver<RMat> es(V.m);
  RVec lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  RMat root = es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
  Eigen::JacobiSVD<RMat> svd(root * omega(d) * root);
  std::vector<double> mods(svd.singularValues().data(),
                           svd.singularValues().data() + d);
  std::sort(mods.begin(), mods.end(), std::greater<double>());
  std::vector<double> nu;
  for (int k = 0; k + 1 < d; k += 2) nu.push_back(0.5 * (mods[k] + mods[k + 1]));
  return nu;
}

inline bool is_physical(const CovMat& V, double tol = 1e-9)
{
  if (!V.is_symmetric()) return false;
  auto nu = symplectic_eigenvalues(V);
  return nu.back() >= 1.0 - tol;
}

inline CovMat apply_channel_cm(const CovMat& V, const GaussianChannel& ch)
{
  if (V.dim() != 2) throw std::invalid_argument("apply_channel_cm expects one mode");
  if (!is_physical(V)) throw std::invalid_argument("input covariance matrix unphysical");
  RMat X = ch.X();
  return CovMat(X.transpose() * V.m * X + ch.Y(), X.transpose() * V.mean);
}

// CM of (Phi (x) id)|Psi_r>, channel applied to mode 1 of the two-mode
// squeezed vacuum: [cosh2r X^T X + Y, sinh2r X^T s3; sinh2r s3 X, cosh2r I].
inline CovMat one_sided_output_cm(const GaussianChannel& ch, double r)
{
  if (r < 0) throw std::invalid_argument("r must be nonnegative");
  double c = std::cosh(2 * r), s = std::sinh(2 * r);
  RMat X = ch.X(), s3 = sigma3();
  RMat v(4, 4);
  v.topLeftCorner(2, 2) = c * X.transpose() * X + ch.Y();
  v.topRightCorner(2, 2) = s * X.transpose() * s3;
  v.bottomLeftCorner(2, 2) = s * s3 * X;
  v.bottomRightCorner(2, 2) = c * RMat::Identity(2, 2);
  return CovMat(v);
}

// partial transpose = momentum sign flip on mode 2
inline std::vector<double> pt_symplectic_eigenvalues(const CovMat& V)
{
  if (V.dim() != 4) throw std::invalid_argument("partial transpose needs two modes");
  RMat L = RMat::Identity(4, 4);
  L(3, 3) = -1;
  return symplectic_eigenvalues(CovMat(L * V.m * L));
}

// CP iff det Y >= (det X - 1)^2; boundary inclusive at 1e-9.
inline bool is_cp(const GaussianChannel& ch, double tol = 1e-9)
{
  double dx = ch.X().determinant(), dy = ch.Y().determinant();
  return dy >= (dx - 1.0) * (dx - 1.0) - tol;
}

inline bool is_quantum_limited(const GaussianChannel& ch, double tol = 1e-9)
{
  return is_cp(ch, tol) &&
         std::abs(ch.alpha - quantum_limited_alpha(ch.family, ch.kappa)) <= tol;
}

// EB iff the one-sided output at a probe squeezing has PPT; the verdict is
// r-independent, so a single probe r0 decides.
inline bool is_entanglement_breaking(const GaussianChannel& ch, double r0 = 1.0,
                                     double tol = 1e-9)
{
  if (!is_cp(ch)) throw std::invalid_argument("channel is not CP");
  auto nu = pt_symplectic_eigenvalues(one_sided_output_cm(ch, r0));
  return nu.back() >= 1.0 - tol;
}

// Scalars of the two-mode symplectic diagonalization feeding Kraus synthesis.
// mu: squeeze angle (C1/C2), theta: beamsplitter angle (D); nu_plus/nu_minus
// keep their +/- roles from the construction (not sorted by magnitude),
// x(nu) = sqrt((nu-1)/(nu+1)),
// norm = cosh^2 r (1-x_plus^2)(1-x_minus^2); mu0/theta0 are the r->inf limits.
struct DiagParams {
  double r = 0;
  double mu = 0;
  double theta = 0;
  double nu_plus = 1;
  double nu_minus = 1;
  double x_plus = 0;
  double x_minus = 0;
  double norm = 1;
  double mu0 = 0;
  double theta0 = 0;
};

inline double thermal_x(double nu)
{
  return std::sqrt(std::max(0.0, (nu - 1.0) / (nu + 1.0)));
}

inline DiagParams diag_params(const GaussianChannel& ch, double r)
{
  bool cd = ch.family == Family::C1 || ch.family == Family::C2;
  if (!cd && ch.family != Family::D)
    throw std::invalid_argument("diag_params defined for C1, C2, D only");
  if (!is_cp(ch)) throw std::invalid_argument("channel is not CP");
  if (r < 0) throw std::invalid_argument("r must be nonnegative");

  double k = ch.kappa, a = ch.alpha;
  double c = std::cosh(2 * r), s = std::sinh(2 * r);
  DiagParams p;
  p.r = r;
  if (cd) {
    p.mu = 0.5 * std::atanh(2 * k * s / ((1 + k * k) * c + a));
    double z = std::sqrt(std::pow(a + (k * k + 1) * c, 2) - 4 * k * k * s * s);
    double w = a + (k * k - 1) * c;
    p.nu_plus = 0.5 * (z + w);
    p.nu_minus = 0.5 * (z - w);
    p.mu0 = (ch.family == Family::C1) ? std::atanh(k) : std::atanh(1 / k);
  } else {
    // branch with sin(theta) <= 0 <= cos(theta); theta -> 0 as r -> 0
    p.theta = 0.5 * (std::atan2(2 * k * s, (1 - k * k) * c - a) - M_PI);
    double z = std::sqrt(std::pow(a + (k * k - 1) * c, 2) + 4 * k * k * s * s);
    double w = a + (k * k + 1) * c;
    p.nu_plus = 0.5 * (w + z);
    p.nu_minus = 0.5 * (w - z);
    p.theta0 = -std::atan(1 / k);
  }
  p.x_plus = thermal_x(p.nu_plus);
  p.x_minus = thermal_x(p.nu_minus);
  double ch_r = std::cosh(r);
  p.norm = ch_r * ch_r * (1 - p.x_plus * p.x_plus) * (1 - p.x_minus * p.x_minus);
  return p;
}

}  // namespace gkraus
