#pragma once

// Independent oracles and cross-representation equivalence checks: quadrature
// moments from number-basis density matrices, the two-mode-squeezed Choi probe,
// channel-oracle comparisons, measure-prepare and composition equivalences,
// and the beam-splitter purity probe.

#include "kraus.hpp"

#include <sstream>

namespace gkraus {

struct VerificationReport {
  std::string check;
  std::string params;
  std::string metric;  // trace_distance | max_abs | cm_max_abs | one_minus_purity
  double value = 0;
  double tolerance = 0;
  bool pass = false;
  double leakage = 0;
  std::string note;
};

inline VerificationReport make_report(std::string check, std::string params,
                                      std::string metric, double value, double tolerance,
                                      double leakage = 0, std::string note = {})
{
  VerificationReport r;
  r.check = std::move(check);
  r.params = std::move(params);
  r.metric = std::move(metric);
  r.value = value;
  r.tolerance = tolerance;
  r.pass = value <= tolerance;
  r.leakage = leakage;
  r.note = std::move(note);
  return r;
}

inline double trace_distance(const Mat& a, const Mat& b)
{
  Mat d = a - b;
  d = 0.5 * (d + d.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

struct MomentDiagnostics {
  double trace_deficit = 0;
  double edge_occupancy = 0;  // population of the top retained level
  bool leak_warn = false;     // moments untrustworthy past 1e-6 leakage
};

namespace detail {

inline void fill_single_mode(RMat& V, RVec& mean, int base, cx ea, cx ea2, double nbar)
{
  double q = std::sqrt(2.0) * ea.real(), p = std::sqrt(2.0) * ea.imag();
  mean[base] = q;
  mean[base + 1] = p;
  V(base, base) = 2 * ea2.real() + 2 * nbar + 1 - 2 * q * q;
  V(base + 1, base + 1) = -2 * ea2.real() + 2 * nbar + 1 - 2 * p * p;
  V(base, base + 1) = V(base + 1, base) = 2 * ea2.imag() - 2 * q * p;
}

}  // namespace detail

// Quadrature mean and covariance from the number-basis density matrix, via
// <a>, <a^2>, <a^dag a>.  Moments are normalized by the retained trace; the
// deficit and the top-level population are reported as leakage diagnostics.
inline CovMat cm_from_density(const Mat& rho, MomentDiagnostics* diag = nullptr)
{
  int N = rho.rows();
  if (rho.cols() != N || N < 2) throw std::invalid_argument("density matrix expected");
  double tr = rho.trace().real();
  cx ea = 0, ea2 = 0;
  double nbar = 0;
  for (int m = 1; m < N; ++m) ea += std::sqrt(double(m)) * rho(m, m - 1);
  for (int m = 2; m < N; ++m) ea2 += std::sqrt(double(m) * (m - 1)) * rho(m, m - 2);
  for (int m = 1; m < N; ++m) nbar += m * rho(m, m).real();
  ea /= tr;
  ea2 /= tr;
  nbar /= tr;
  if (diag) {
    diag->trace_deficit = std::abs(1.0 - tr);
    diag->edge_occupancy = std::abs(rho(N - 1, N - 1));
    diag->leak_warn = diag->trace_deficit > 1e-6 || diag->edge_occupancy > 1e-6;
  }
  CovMat out;
  out.m = RMat::Zero(2, 2);
  out.mean = RVec::Zero(2);
  detail::fill_single_mode(out.m, out.mean, 0, ea, ea2, nbar);
  return out;
}

// Two-mode variant; rho indexed by i*d2 + j (mode-1 major).
inline CovMat cm_from_density_two_mode(const Mat& rho, int d1, int d2,
                                       MomentDiagnostics* diag = nullptr)
{
  if (rho.rows() != Eigen::Index(d1) * d2 || rho.cols() != rho.rows())
    throw std::invalid_argument("two-mode density dimensions do not match");
  auto idx = [d2](int i, int j) { return i * d2 + j; };
  double tr = rho.trace().real();
  cx ea1 = 0, ea2m = 0, e1sq = 0, e2sq = 0, u = 0, v = 0;
  double n1 = 0, n2 = 0, edge = 0;
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d2; ++j) {
      cx p = rho(idx(i, j), idx(i, j));
      n1 += i * p.real();
      n2 += j * p.real();
      if (i == d1 - 1 || j == d2 - 1) edge = std::max(edge, std::abs(p));
      if (i >= 1) ea1 += std::sqrt(double(i)) * rho(idx(i, j), idx(i - 1, j));
      if (j >= 1) ea2m += std::sqrt(double(j)) * rho(idx(i, j), idx(i, j - 1));
      if (i >= 2) e1sq += std::sqrt(double(i) * (i - 1)) * rho(idx(i, j), idx(i - 2, j));
      if (j >= 2) e2sq += std::sqrt(double(j) * (j - 1)) * rho(idx(i, j), idx(i, j - 2));
      if (i >= 1 && j >= 1) u += std::sqrt(double(i) * j) * rho(idx(i, j), idx(i - 1, j - 1));
      if (i >= 1 && j + 1 < d2)
        v += std::sqrt(double(i) * (j + 1)) * rho(idx(i, j), idx(i - 1, j + 1));
    }
  ea1 /= tr; ea2m /= tr; e1sq /= tr; e2sq /= tr; u /= tr; v /= tr;
  n1 /= tr; n2 /= tr;
  if (diag) {
    diag->trace_deficit = std::abs(1.0 - tr);
    diag->edge_occupancy = edge;
    diag->leak_warn = diag->trace_deficit > 1e-6 || edge > 1e-6;
  }
  CovMat out;
  out.m = RMat::Zero(4, 4);
  out.mean = RVec::Zero(4);
  detail::fill_single_mode(out.m, out.mean, 0, ea1, e1sq, n1);
  detail::fill_single_mode(out.m, out.mean, 2, ea2m, e2sq, n2);
  double q1 = out.mean[0], p1 = out.mean[1], q2 = out.mean[2], p2 = out.mean[3];
  out.m(0, 2) = out.m(2, 0) = 2 * (u.real() + v.real()) - 2 * q1 * q2;
  out.m(0, 3) = out.m(3, 0) = 2 * (u.imag() - v.imag()) - 2 * q1 * p2;
  out.m(1, 2) = out.m(2, 1) = 2 * (u.imag() + v.imag()) - 2 * p1 * q2;
  out.m(1, 3) = out.m(3, 1) = 2 * (-u.real() + v.real()) - 2 * p1 * p2;
  return out;
}

// Output CM of (family tensor identity) applied to the truncated two-mode
// squeezed vacuum, without ever forming the N^2 x N^2 joint state: each Kraus
// operator contributes through M_k = K_k diag(sech r tanh^j r), with joint
// moments <A tensor B> = sum_k w_k tr(M_k^dag A M_k B^T).
inline CovMat choi_output_cm(const KrausFamily& fam, double r,
                             MomentDiagnostics* diag = nullptr)
{
  int N = fam.dim;
  double th = std::tanh(r), sch = 1.0 / std::cosh(r);
  Vec d(N);
  for (int j = 0; j < N; ++j) d[j] = sch * std::pow(th, j);

  int rmax = N;
  for (const auto& t : fam.ops) rmax = std::max(rmax, t.rows());
  Mat s1 = Mat::Zero(rmax, rmax);  // mode-1 reduced density
  Mat s2 = Mat::Zero(N, N);        // transpose of the mode-2 reduced density
  Mat a_big = annihilation_op(rmax);
  Mat a2 = annihilation_op(N);
  cx u = 0, v = 0;  // <a1 a2>, <a1 a2^dag>
  for (const auto& t : fam.ops) {
    if (t.factored) {
      Vec b2 = t.bra.cwiseProduct(d);
      int k = t.ket.size();
      s1.topLeftCorner(k, k).noalias() += (t.weight * b2.squaredNorm()) * (t.ket * t.ket.adjoint());
      s2.noalias() += (t.weight * t.ket.squaredNorm()) * (b2 * b2.adjoint());
      cx m1a = t.ket.dot(a_big.topLeftCorner(k, k) * t.ket);
      u += t.weight * m1a * b2.dot(a2.transpose() * b2);
      v += t.weight * m1a * b2.dot(a2 * b2);
    } else {
      int R = t.m.rows();
      Mat M = t.m * d.asDiagonal();
      s1.topLeftCorner(R, R).noalias() += t.weight * (M * M.adjoint());
      s2.noalias() += t.weight * (M.adjoint() * M);
      Mat Y = M.adjoint() * (a_big.topLeftCorner(R, R) * M);
      u += t.weight * Y.cwiseProduct(a2).sum();       // tr(Y a^T)
      v += t.weight * (Y * a2).trace();               // tr(Y a)
    }
  }

  double tr = s1.trace().real();
  cx ea1 = 0, e1sq = 0, ea2m = 0, e2sq = 0;
  double n1 = 0, n2 = 0;
  for (int m = 1; m < rmax; ++m) ea1 += std::sqrt(double(m)) * s1(m, m - 1);
  for (int m = 2; m < rmax; ++m) e1sq += std::sqrt(double(m) * (m - 1)) * s1(m, m - 2);
  for (int m = 1; m < rmax; ++m) n1 += m * s1(m, m).real();
  // mode-2 density is s2^T: tr(s2^T A) accumulates with swapped entry order
  for (int m = 1; m < N; ++m) ea2m += std::sqrt(double(m)) * s2(m - 1, m);
  for (int m = 2; m < N; ++m) e2sq += std::sqrt(double(m) * (m - 1)) * s2(m - 2, m);
  for (int m = 1; m < N; ++m) n2 += m * s2(m, m).real();
  ea1 /= tr; e1sq /= tr; ea2m /= tr; e2sq /= tr; n1 /= tr; n2 /= tr;
  u /= tr; v /= tr;
  if (diag) {
    diag->trace_deficit = std::abs(1.0 - tr);
    diag->edge_occupancy = std::max(std::abs(s1(rmax - 1, rmax - 1)), std::abs(s2(N - 1, N - 1)));
    diag->leak_warn = diag->trace_deficit > 1e-6 || diag->edge_occupancy > 1e-6;
  }

  CovMat out;
  out.m = RMat::Zero(4, 4);
  out.mean = RVec::Zero(4);
  detail::fill_single_mode(out.m, out.mean, 0, ea1, e1sq, n1);
  detail::fill_single_mode(out.m, out.mean, 2, ea2m, e2sq, n2);
  double q1 = out.mean[0], p1 = out.mean[1], q2 = out.mean[2], p2 = out.mean[3];
  out.m(0, 2) = out.m(2, 0) = 2 * (u.real() + v.real()) - 2 * q1 * q2;
  out.m(0, 3) = out.m(3, 0) = 2 * (u.imag() - v.imag()) - 2 * q1 * p2;
  out.m(1, 2) = out.m(2, 1) = 2 * (u.imag() + v.imag()) - 2 * p1 * q2;
  out.m(1, 3) = out.m(3, 1) = 2 * (-u.real() + v.real()) - 2 * p1 * p2;
  return out;
}

inline VerificationReport choi_cm_check(const KrausFamily& fam, double r)
{
  MomentDiagnostics diag;
  CovMat got = choi_output_cm(fam, r, &diag);
  CovMat want = one_sided_output_cm(fam.channel(), r);
  double value = std::max(max_abs(RMat(got.m - want.m)),
                          (got.mean - want.mean).cwiseAbs().maxCoeff());
  std::ostringstream ps;
  ps << family_name(fam.family) << " " << rep_name(fam.rep) << " kappa=" << fam.kappa
     << " alpha=" << fam.alpha << " r=" << r << " N=" << fam.dim;
  return make_report("choi_cm", ps.str(), "cm_max_abs", value, 1e-4,
                     diag.trace_deficit + diag.edge_occupancy);
}

struct GaussianInput {
  std::string name;
  Mat rho;
  CovMat cm;
};

// vacuum, coherent(1), thermal(nu = 2) at truncation N
inline std::vector<GaussianInput> canonical_inputs(int N)
{
  std::vector<GaussianInput> v(3);
  v[0].name = "vacuum";
  v[0].rho = Mat::Zero(N, N);
  v[0].rho(0, 0) = 1.0;
  v[0].cm.m = RMat::Identity(2, 2);
  v[0].cm.mean = RVec::Zero(2);

  v[1].name = "coherent(1)";
  Vec c = coherent_state(1.0, N).amps;
  v[1].rho = c * c.adjoint();
  v[1].cm.m = RMat::Identity(2, 2);
  v[1].cm.mean = RVec::Zero(2);
  v[1].cm.mean[0] = std::sqrt(2.0);

  v[2].name = "thermal(2)";
  v[2].rho = thermal_state(2.0, N);
  v[2].cm.m = 2.0 * RMat::Identity(2, 2);
  v[2].cm.mean = RVec::Zero(2);
  return v;
}

// CM of apply_kraus output vs the phase-space oracle X^T V X + Y.
inline VerificationReport oracle_equivalence(const KrausFamily& fam, const GaussianInput& in,
                                             double tolerance)
{
  Mat out = apply_kraus(fam, in.rho);
  MomentDiagnostics diag;
  CovMat got = cm_from_density(out, &diag);
  CovMat want = apply_channel_cm(in.cm, fam.channel());
  double value = std::max(max_abs(RMat(got.m - want.m)),
                          (got.mean - want.mean).cwiseAbs().maxCoeff());
  std::ostringstream ps;
  ps << family_name(fam.family) << " " << rep_name(fam.rep) << " kappa=" << fam.kappa
     << " alpha=" << fam.alpha << " N=" << fam.dim << " in=" << in.name;
  return make_report("oracle_equivalence", ps.str(), "cm_max_abs", value, tolerance,
                     diag.trace_deficit + diag.edge_occupancy);
}

// Trace distance between the threshold rank-one coherent family and the
// double-indexed Fock family at alpha = kappa^2 + 1, per test state.
inline VerificationReport measure_prepare_equivalence(double kappa, int N,
                                                      const std::vector<Mat>& states,
                                                      std::string state_names = {})
{
  Family tag = kappa <= 1.0 ? Family::C1 : Family::C2;
  double alpha = kappa * kappa + 1;
  auto eb = eb_rank_one(tag, kappa, Grid2D{}, N);
  auto noisy = noisy_family(tag, kappa, alpha, N, 32, 48);
  double worst = 0;
  for (const auto& rho : states)
    worst = std::max(worst, trace_distance(apply_kraus(eb, rho), apply_kraus(noisy, rho)));
  std::ostringstream ps;
  ps << family_name(tag) << " kappa=" << kappa << " alpha=" << alpha << " N=" << N;
  if (!state_names.empty()) ps << " states=" << state_names;
  return make_report("measure_prepare", ps.str(), "trace_distance", worst, 1e-3);
}

struct CompositionOutcome {
  VerificationReport equivalence;  // sequential action vs direct representation
  VerificationReport cm_oracle;    // sequential output CM vs channel oracle
  std::string matching_order;
  double matching_value = 0;  // td(sequential, product family in matching order)
  double reversed_value = 0;  // td against the reversed-order product family
};

// Sequential attenuate(k1)-then-amplify(k2) against the single-family
// representations of the resulting channel (kappa = k1 k2,
// alpha = k2^2 (1 - k1^2) + k2^2 - 1), plus both product-operator orderings.
inline CompositionOutcome composition_check(double k1, double k2, int N,
                                            const std::vector<Mat>& states)
{
  double kappa = k1 * k2;
  double alpha = k2 * k2 * (1 - k1 * k1) + k2 * k2 - 1;
  Family tag = std::abs(kappa - 1.0) < 1e-12 ? Family::B2
                                             : (kappa < 1 ? Family::C1 : Family::C2);
  auto ch = make_channel(tag, kappa, alpha);

  auto att = attenuator_ql(k1, N);
  auto amp = amplifier_ql(k2, N);
  auto seq = [&](const Mat& rho) { return apply_kraus(amp, apply_kraus(att, rho)); };

  // product families in both orderings; the reversed order realizes a channel
  // with the noise terms picked up in the opposite sequence
  double alpha_rev = k1 * k1 * (k2 * k2 - 1) + 1 - k1 * k1;
  auto ch_rev = make_channel(tag, kappa, alpha_rev);
  auto prod = compose(amp, att, ch);
  auto prod_rev = compose(att, amp, ch_rev);

  CompositionOutcome out;
  double worst_direct = 0;
  for (const auto& rho : states) {
    Mat s = seq(rho);
    out.matching_value = std::max(out.matching_value, trace_distance(s, apply_kraus(prod, rho)));
    out.reversed_value = std::max(out.reversed_value, trace_distance(s, apply_kraus(prod_rev, rho)));
  }
  std::string direct_desc;
  if (tag == Family::B2) {
    // kappa = 1: the double-index synthesis degenerates; the product family
    // itself is the discrete representation of the additive-noise channel
    worst_direct = out.matching_value;
    direct_desc = "product family (double-discrete form of the additive-noise channel)";
  } else {
    auto noisy = noisy_family(tag, kappa, alpha, N, 40, 52);
    for (const auto& rho : states)
      worst_direct = std::max(worst_direct,
                              trace_distance(seq(rho), apply_kraus(noisy, rho)));
    direct_desc = "noisy double-index family";
  }
  out.matching_order = out.matching_value <= out.reversed_value
                           ? "amplifier-after-attenuator products A_i(k2) B_j(k1)"
                           : "attenuator-after-amplifier products B_j(k1) A_i(k2)";

  std::ostringstream ps;
  ps << "k1=" << k1 << " k2=" << k2 << " kappa=" << kappa << " alpha=" << alpha
     << " N=" << N;
  out.equivalence = make_report("composition_equivalence", ps.str(), "trace_distance",
                                worst_direct, 1e-6, 0, "direct = " + direct_desc);

  // CM oracle on vacuum through the sequential action
  Mat vac = Mat::Zero(N, N);
  vac(0, 0) = 1.0;
  MomentDiagnostics diag;
  CovMat got = cm_from_density(seq(vac), &diag);
  CovMat want = apply_channel_cm(CovMat{RMat::Identity(2, 2), RVec::Zero(2)}, ch);
  double cm_err = std::max(max_abs(RMat(got.m - want.m)),
                           (got.mean - want.mean).cwiseAbs().maxCoeff());
  out.cm_oracle = make_report("composition_cm_oracle", ps.str(), "cm_max_abs", cm_err, 1e-4,
                              diag.trace_deficit);
  return out;
}

// 1 - purity of the reduced beam-splitter output on |psi> tensor |0>; zero
// exactly when |psi> is coherent.  Total photon number is conserved, so the
// two-mode amplitudes live on shells m1 + m2 = n1 and truncation is exact.
inline double lemma1_value(const Vec& psi, double theta)
{
  int N = psi.size();
  Mat X = Mat::Zero(N, N);
  for (int m1 = 0; m1 < N; ++m1)
    for (int m2 = 0; m1 + m2 < N; ++m2)
      X(m1, m2) = psi[m1 + m2] * bs_matrix_element(theta, m1, m2, m1 + m2, 0);
  double norm2 = X.squaredNorm();
  double purity = (X.adjoint() * X).squaredNorm() / (norm2 * norm2);
  return 1.0 - purity;
}

inline VerificationReport lemma1_check(const Vec& psi, double theta, std::string label,
                                       double tolerance)
{
  double value = lemma1_value(psi, theta);
  std::ostringstream ps;
  ps << "psi=" << label << " theta=" << theta << " N=" << psi.size();
  return make_report("lemma1_purity", ps.str(), "one_minus_purity", value, tolerance);
}

}  // namespace gkraus
