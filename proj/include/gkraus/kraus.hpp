#pragma once

// Synthesis of every operator-sum representation handled by the library and
// application of a family to a state.
//
// Ladder families that raise the Fock level (amplifier, phase conjugation,
// and their noisy analogues in the raising direction) are built as
// rectangular rows x dim matrices: rows beyond the input truncation are kept
// so that sum K^dag K captures the full row support and the completeness laws
// hold up to the analytic index tail alone.  apply_kraus crops the output
// back to dim and reports the cropped weight as trace deficit.

#include "fock.hpp"
#include "phase_space.hpp"

#include <cmath>
#include <limits>

namespace gkraus {

enum class RepKind { finite_r, limit, noisy, eb_rank_one, a2, b1, composed };

inline std::string rep_name(RepKind k)
{
  switch (k) {
    case RepKind::finite_r: return "finite_r";
    case RepKind::limit: return "limit";
    case RepKind::noisy: return "noisy";
    case RepKind::eb_rank_one: return "eb_rank_one";
    case RepKind::a2: return "a2";
    case RepKind::b1: return "b1";
    case RepKind::composed: return "composed";
  }
  throw std::logic_error("bad rep tag");
}

inline std::optional<RepKind> rep_from_name(const std::string& s)
{
  if (s == "finite_r") return RepKind::finite_r;
  if (s == "limit") return RepKind::limit;
  if (s == "noisy") return RepKind::noisy;
  if (s == "eb_rank_one") return RepKind::eb_rank_one;
  if (s == "a2") return RepKind::a2;
  if (s == "b1") return RepKind::b1;
  if (s == "composed") return RepKind::composed;
  return std::nullopt;
}

enum class IndexKind { single, double_index, quadrature_1d, quadrature_2d };

inline std::string index_kind_name(IndexKind k)
{
  switch (k) {
    case IndexKind::single: return "single";
    case IndexKind::double_index: return "double";
    case IndexKind::quadrature_1d: return "quadrature_1d";
    case IndexKind::quadrature_2d: return "quadrature_2d";
  }
  throw std::logic_error("bad index kind");
}

struct KrausTerm {
  int n1 = -1, n2 = -1;  // discrete indices; n2 unused for single-index
  cx point{0.0, 0.0};    // quadrature sample
  double weight = 1.0;   // quadrature weight (1 for discrete terms)
  Mat m;                 // dense matrix, rows x dim (rows may exceed dim)
  Vec ket, bra;          // |ket><bra| storage for rank-one terms
  bool factored = false;

  Mat dense() const { return factored ? Mat(ket * bra.adjoint()) : m; }
  int rows() const { return factored ? int(ket.size()) : int(m.rows()); }
};

struct KrausFamily {
  Family family = Family::C1;
  RepKind rep = RepKind::limit;
  double kappa = 0.0;
  double alpha = 0.0;
  double r = std::numeric_limits<double>::quiet_NaN();  // finite_r only
  int dim = 0;
  IndexKind kind = IndexKind::single;
  int n_max = -1;              // single-index cutoff (inclusive)
  int n1_max = -1, n2_max = -1;  // double-index cutoffs (inclusive)
  Grid1D grid1;
  Grid2D grid2;
  std::vector<KrausTerm> ops;

  bool finite_r() const { return rep == RepKind::finite_r; }

  GaussianChannel channel() const
  {
    return make_channel(family, family_uses_kappa(family) ? kappa : 0.0, alpha);
  }
};

// ---- single-index ladder operators ---------------------------------------

// T_n^b = sqrt(N_b) x(nu_-)^n sum_m sqrt(C(m+n,n)) tanh^m mu sech^{n+1} mu |m><m+n|
inline Mat attenuator_finite_r_op(const DiagParams& p, int n, int N)
{
  Mat T = Mat::Zero(N, N);
  double th = std::tanh(p.mu), sh = 1.0 / std::cosh(p.mu);
  double scale = std::sqrt(p.norm) * std::pow(p.x_minus, n) * std::pow(sh, n + 1);
  for (int m = 0; m + n < N; ++m)
    T(m, m + n) = scale * sqrt_binom(m + n, n) * std::pow(th, m);
  return T;
}

// T_n^a = sqrt(N_a) x(nu_+)^n sum_m sqrt(C(m+n,n)) tanh^m mu sech^{n+1} mu |m+n><m|
inline Mat amplifier_finite_r_op(const DiagParams& p, int n, int N)
{
  Mat T = Mat::Zero(N + n, N);
  double th = std::tanh(p.mu), sh = 1.0 / std::cosh(p.mu);
  double scale = std::sqrt(p.norm) * std::pow(p.x_plus, n) * std::pow(sh, n + 1);
  for (int m = 0; m < N; ++m)
    T(m + n, m) = scale * sqrt_binom(m + n, n) * std::pow(th, m);
  return T;
}

// T_n^c = sqrt(N_c) x(nu_+)^n sum_{m<=n} sqrt(C(n,m)) (-sin t)^m cos^{n-m} t |n-m><m|
inline Mat phase_conj_finite_r_op(const DiagParams& p, int n, int N)
{
  Mat T = Mat::Zero(n + 1, N);
  double sn = -std::sin(p.theta), cs = std::cos(p.theta);
  double scale = std::sqrt(p.norm) * std::pow(p.x_plus, n);
  for (int m = 0; m <= n && m < N; ++m)
    T(n - m, m) = scale * sqrt_binom(n, m) * std::pow(sn, m) * std::pow(cs, n - m);
  return T;
}

// B_n = sum_m sqrt(C(m+n,n)) kappa^m (sqrt(1-kappa^2))^n |m><m+n|
inline Mat attenuator_ql_op(double kappa, int n, int N)
{
  Mat B = Mat::Zero(N, N);
  double scale = std::pow(std::sqrt(1 - kappa * kappa), n);
  for (int m = 0; m + n < N; ++m)
    B(m, m + n) = scale * sqrt_binom(m + n, n) * std::pow(kappa, m);
  return B;
}

// A_n = sum_m sqrt(C(m+n,n)) kappa^{-(m+1)} (sqrt(kappa^2-1)/kappa)^n |m+n><m|
inline Mat amplifier_ql_op(double kappa, int n, int N)
{
  Mat A = Mat::Zero(N + n, N);
  double scale = std::pow(std::sqrt(kappa * kappa - 1) / kappa, n);
  for (int m = 0; m < N; ++m)
    A(m + n, m) = scale * sqrt_binom(m + n, n) * std::pow(kappa, -(m + 1));
  return A;
}

// C_n = (1+k^2)^{-1/2} sum_{m<=n} sqrt(C(n,m)) [k/sqrt(1+k^2)]^{n-m}
//       [1/sqrt(1+k^2)]^m |n-m><m|
inline Mat phase_conj_ql_op(double kappa, int n, int N)
{
  Mat C = Mat::Zero(n + 1, N);
  double s = std::sqrt(1 + kappa * kappa);
  for (int m = 0; m <= n && m < N; ++m)
    C(n - m, m) = sqrt_binom(n, m) * std::pow(kappa / s, n - m) * std::pow(1 / s, m) / s;
  return C;
}

namespace detail {

inline KrausFamily ladder_family(Family f, RepKind rep, double kappa, double alpha,
                                 double r, int N, int n_max)
{
  KrausFamily fam;
  fam.family = f;
  fam.rep = rep;
  fam.kappa = kappa;
  fam.alpha = alpha;
  fam.r = r;
  fam.dim = N;
  fam.kind = IndexKind::single;
  fam.n_max = n_max < 0 ? N : n_max;
  return fam;
}

inline void push_if_nonzero(KrausFamily& fam, int n, Mat&& T)
{
  if (max_abs(T) == 0.0) return;
  KrausTerm t;
  t.n1 = n;
  t.m = std::move(T);
  fam.ops.push_back(std::move(t));
}

}  // namespace detail

inline KrausFamily attenuator_finite_r(double r, double kappa, int N, int n_max = -1)
{
  if (!(kappa > 0 && kappa <= 1)) throw std::invalid_argument("attenuator needs 0 < kappa <= 1");
  if (!(r > 0)) throw std::invalid_argument("finite-r synthesis needs r > 0");
  double a = 1 - kappa * kappa;
  auto fam = detail::ladder_family(Family::C1, RepKind::finite_r, kappa, a, r, N, n_max);
  auto p = diag_params(make_channel(Family::C1, kappa, a), r);
  for (int n = 0; n <= fam.n_max; ++n)
    detail::push_if_nonzero(fam, n, attenuator_finite_r_op(p, n, N));
  return fam;
}

inline KrausFamily attenuator_ql(double kappa, int N, int n_max = -1)
{
  if (!(kappa > 0 && kappa <= 1)) throw std::invalid_argument("attenuator needs 0 < kappa <= 1");
  auto fam = detail::ladder_family(Family::C1, RepKind::limit, kappa, 1 - kappa * kappa,
                                   std::numeric_limits<double>::quiet_NaN(), N, n_max);
  for (int n = 0; n <= fam.n_max; ++n)
    detail::push_if_nonzero(fam, n, attenuator_ql_op(kappa, n, N));
  return fam;
}

inline KrausFamily amplifier_finite_r(double r, double kappa, int N, int n_max = -1)
{
  if (!(kappa >= 1)) throw std::invalid_argument("amplifier needs kappa >= 1");
  if (!(r > 0)) throw std::invalid_argument("finite-r synthesis needs r > 0");
  double a = kappa * kappa - 1;
  auto fam = detail::ladder_family(Family::C2, RepKind::finite_r, kappa, a, r, N, n_max);
  auto p = diag_params(make_channel(Family::C2, kappa, a), r);
  for (int n = 0; n <= fam.n_max; ++n)
    detail::push_if_nonzero(fam, n, amplifier_finite_r_op(p, n, N));
  return fam;
}

inline KrausFamily amplifier_ql(double kappa, int N, int n_max = -1)
{
  if (!(kappa >= 1)) throw std::invalid_argument("amplifier needs kappa >= 1");
  auto fam = detail::ladder_family(Family::C2, RepKind::limit, kappa, kappa * kappa - 1,
                                   std::numeric_limits<double>::quiet_NaN(), N, n_max);
  for (int n = 0; n <= fam.n_max; ++n)
    detail::push_if_nonzero(fam, n, amplifier_ql_op(kappa, n, N));
  return fam;
}

inline KrausFamily phase_conj_finite_r(double r, double kappa, int N, int n_max = -1)
{
  if (!(kappa > 0)) throw std::invalid_argument("phase conjugation needs kappa > 0");
  if (!(r > 0)) throw std::invalid_argument("finite-r synthesis needs r > 0");
  double a = kappa * kappa + 1;
  auto fam = detail::ladder_family(Family::D, RepKind::finite_r, kappa, a, r, N, n_max);
  auto p = diag_params(make_channel(Family::D, kappa, a), r);
  for (int n = 0; n <= fam.n_max; ++n)
    detail::push_if_nonzero(fam, n, phase_conj_finite_r_op(p, n, N));
  return fam;
}

inline KrausFamily phase_conj_ql(double kappa, int N, int n_max = -1)
{
  if (!(kappa > 0)) throw std::invalid_argument("phase conjugation needs kappa > 0");
  auto fam = detail::ladder_family(Family::D, RepKind::limit, kappa, kappa * kappa + 1,
                                   std::numeric_limits<double>::quiet_NaN(), N, n_max);
  for (int n = 0; n <= fam.n_max; ++n)
    detail::push_if_nonzero(fam, n, phase_conj_ql_op(kappa, n, N));
  return fam;
}

// ---- double-index noisy families ------------------------------------------

// B_{n1,n2} = sum_{m1 >= max(0,n1-n2)} gamma_b |m1><n2+m1-n1|,
// gamma_b = sqrt(2/(a+1-k^2)) [(a+k^2-1)/(a+1-k^2)]^{n1/2} h_b[mu0]
// (and the amplifier/phase-conjugation analogues with the n2-decaying ratio).
inline KrausFamily noisy_family(Family tag, double kappa, double alpha, int N,
                                int n1_max = -1, int n2_max = -1)
{
  if (tag != Family::C1 && tag != Family::C2 && tag != Family::D)
    throw std::invalid_argument("noisy_family defined for C1, C2, D");
  auto ch = make_channel(tag, kappa, alpha);
  if (!is_cp(ch)) throw std::invalid_argument("channel is not CP");
  if (tag != Family::D && kappa == 1.0)
    throw std::invalid_argument("double-index synthesis degenerates at kappa = 1");

  KrausFamily fam;
  fam.family = tag;
  fam.rep = RepKind::noisy;
  fam.kappa = kappa;
  fam.alpha = alpha;
  fam.dim = N;
  fam.kind = IndexKind::double_index;
  fam.n1_max = n1_max < 0 ? N : n1_max;
  fam.n2_max = n2_max < 0 ? N : n2_max;

  double k2 = kappa * kappa;
  if (tag == Family::C1 || tag == Family::C2) {
    bool att = tag == Family::C1;
    double mu0 = att ? std::atanh(kappa) : std::atanh(1 / kappa);
    double denom = att ? alpha + 1 - k2 : alpha + k2 - 1;
    double ratio = att ? (alpha + k2 - 1) / denom : (alpha - k2 + 1) / denom;
    double pref = std::sqrt(2 / denom);
    for (int n1 = 0; n1 <= fam.n1_max; ++n1)
      for (int n2 = 0; n2 <= fam.n2_max; ++n2) {
        double x_pow = std::pow(std::sqrt(ratio), att ? n1 : n2);
        if (x_pow == 0.0 && (att ? n1 : n2) > 0) continue;
        Mat T = Mat::Zero(N, N);
        bool any = false;
        for (int m1 = std::max(0, n1 - n2); m1 < N; ++m1) {
          int m2 = n2 + m1 - n1;
          if (m2 < 0) continue;
          if (m2 >= N) break;
          double h = tms_matrix_element(mu0, m1, m2, n1, n2);
          if (h != 0.0) any = true;
          T(m1, m2) = pref * x_pow * h;
        }
        if (!any) continue;
        KrausTerm t;
        t.n1 = n1;
        t.n2 = n2;
        t.m = std::move(T);
        fam.ops.push_back(std::move(t));
      }
  } else {
    double theta0 = -std::atan(1 / kappa);
    double denom = alpha + k2 + 1;
    double ratio = (alpha - k2 - 1) / denom;
    double pref = std::sqrt(2 / denom);
    for (int n1 = 0; n1 <= fam.n1_max; ++n1)
      for (int n2 = 0; n2 <= fam.n2_max; ++n2) {
        double x_pow = std::pow(std::sqrt(ratio), n2);
        if (x_pow == 0.0 && n2 > 0) continue;
        int shell = n1 + n2;
        int rows = std::min(shell + 1, N);
        Mat T = Mat::Zero(rows, N);
        bool any = false;
        for (int m2 = std::max(0, shell - (N - 1)); m2 <= shell && m2 < N; ++m2) {
          int m1 = shell - m2;
          if (m1 >= N) continue;
          double h = bs_matrix_element(theta0, m1, m2, n1, n2);
          if (h != 0.0) any = true;
          T(m1, m2) = pref * x_pow * h;
        }
        if (!any) continue;
        KrausTerm t;
        t.n1 = n1;
        t.n2 = n2;
        t.m = std::move(T);
        fam.ops.push_back(std::move(t));
      }
  }
  return fam;
}

// ---- rank-one quadrature families ------------------------------------------

// Table-1 measure-prepare operators at the entanglement-breaking threshold,
// sampled on a Cartesian grid with measure d^2 beta / pi.
inline KrausFamily eb_rank_one(Family tag, double kappa, const Grid2D& grid, int N)
{
  double alpha;
  switch (tag) {
    case Family::C1:
    case Family::C2:
    case Family::D: alpha = kappa * kappa + 1; break;
    case Family::B2: alpha = 2.0; kappa = 1.0; break;
    case Family::A1: alpha = 1.0; kappa = 0.0; break;
    default:
      throw std::invalid_argument("no rank-one coherent family for this tag");
  }
  if (family_uses_kappa(tag)) make_channel(tag, kappa, alpha);  // domain check

  KrausFamily fam;
  fam.family = tag;
  fam.rep = RepKind::eb_rank_one;
  fam.kappa = kappa;
  fam.alpha = alpha;
  fam.dim = N;
  fam.kind = IndexKind::quadrature_2d;
  fam.grid2 = grid;

  Vec vac = Vec::Zero(N);
  vac[0] = 1.0;
  double w = grid.weight();
  for (cx b : grid.points()) {
    KrausTerm t;
    t.point = b;
    t.weight = w;
    t.factored = true;
    t.bra = coherent_state(b, N).amps;
    switch (tag) {
      case Family::C1:
      case Family::C2: t.ket = coherent_state(kappa * b, N).amps; break;
      case Family::D: t.ket = coherent_state(kappa * std::conj(b), N).amps; break;
      case Family::B2: t.ket = t.bra; break;
      case Family::A1: t.ket = vac; break;
      default: break;
    }
    fam.ops.push_back(std::move(t));
  }
  return fam;
}

// A_x = |x/sqrt(2)>_coh <x|_pos on a 1D grid with measure dx (alpha = 1)
inline KrausFamily a2_kraus(const Grid1D& grid, int N)
{
  KrausFamily fam;
  fam.family = Family::A2;
  fam.rep = RepKind::a2;
  fam.alpha = 1.0;
  fam.dim = N;
  fam.kind = IndexKind::quadrature_1d;
  fam.grid1 = grid;
  for (double x : grid.points()) {
    KrausTerm t;
    t.point = cx(x, 0);
    t.weight = grid.step;
    t.factored = true;
    t.ket = coherent_state(x / std::sqrt(2.0), N).amps;
    t.bra = position_wavefunctions(N, x).cast<cx>();
    fam.ops.push_back(std::move(t));
  }
  return fam;
}

// Single-quadrature classical noise: displacements D(s/sqrt(2)) along q with
// Gaussian weight p(s) = e^{-s^2/alpha}/sqrt(pi alpha); discrete weights are
// renormalized to sum to one so the sampled family stays exactly trace
// preserving (alpha -> 0 collapses to the identity channel).
inline KrausFamily b1_kraus(double alpha, const Grid1D& grid, int N)
{
  if (alpha < 0) throw std::invalid_argument("alpha must be nonnegative");
  KrausFamily fam;
  fam.family = Family::B1;
  fam.rep = RepKind::b1;
  fam.alpha = alpha;
  fam.dim = N;
  fam.kind = IndexKind::quadrature_1d;
  fam.grid1 = grid;
  if (alpha == 0.0) {
    KrausTerm t;
    t.weight = 1.0;
    t.m = Mat::Identity(N, N);
    fam.ops.push_back(std::move(t));
    return fam;
  }
  auto xs = grid.points();
  std::vector<double> ws(xs.size());
  double tot = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    ws[i] = std::exp(-xs[i] * xs[i] / alpha) / std::sqrt(M_PI * alpha) * grid.step;
    tot += ws[i];
  }
  for (size_t i = 0; i < xs.size(); ++i) {
    KrausTerm t;
    t.point = cx(xs[i], 0);
    t.weight = ws[i] / tot;
    t.m = displacement_operator(xs[i] / std::sqrt(2.0), N);
    fam.ops.push_back(std::move(t));
  }
  return fam;
}

// Product family {sqrt(w_g w_f) G_j F_i}.  First-stage operators are cropped
// (or zero-padded) to the shared truncation before the second stage acts, so
// the result is exactly the operator-sum of "apply first, then second" on the
// truncated space; `result` labels the Gaussian channel the product realizes.
inline KrausFamily compose(const KrausFamily& second, const KrausFamily& first,
                           const GaussianChannel& result)
{
  if (first.dim != second.dim)
    throw std::invalid_argument("composition stages must share a truncation");
  int N = first.dim;
  KrausFamily fam;
  fam.family = result.family;
  fam.rep = RepKind::composed;
  fam.kappa = family_uses_kappa(result.family) ? result.kappa : 0.0;
  fam.alpha = result.alpha;
  fam.dim = N;
  fam.kind = IndexKind::double_index;
  fam.n1_max = first.n_max;
  fam.n2_max = second.n_max;
  for (const auto& f : first.ops) {
    Mat kf = Mat::Zero(N, N);
    int rf = std::min(f.rows(), N);
    kf.topRows(rf) = f.dense().topRows(rf);
    for (const auto& g : second.ops) {
      KrausTerm t;
      t.n1 = f.n1;
      t.n2 = g.n1;
      t.weight = f.weight * g.weight;
      t.m = g.dense() * kf;
      if (max_abs(t.m) == 0.0) continue;
      fam.ops.push_back(std::move(t));
    }
  }
  return fam;
}

// ---- application and completeness ------------------------------------------

// sum_k w_k K_k rho K_k^dag, cropped to the family dimension; the trace
// deficit tr(rho) - tr(out) is the truncation + index-cutoff leakage.
inline Mat apply_kraus(const KrausFamily& fam, const Mat& rho)
{
  if (rho.rows() != fam.dim || rho.cols() != fam.dim)
    throw std::invalid_argument("state dimension does not match family");
  int N = fam.dim;
  Mat out = Mat::Zero(N, N);
  for (const auto& t : fam.ops) {
    if (t.factored) {
      cx s = t.bra.dot(rho * t.bra);
      out.noalias() += (t.weight * s) * (t.ket * t.ket.adjoint());
    } else {
      int R = std::min<int>(t.m.rows(), N);
      const auto K = t.m.topRows(R);
      out.topLeftCorner(R, R).noalias() += t.weight * (K * rho * K.adjoint());
    }
  }
  return out;
}

struct CompletenessReport {
  Mat defect;               // sum w K^dag K minus its target
  double max_abs_full = 0;  // over all dim levels
  double max_abs_interior = 0;
  int interior_levels = 0;
};

inline Mat completeness_target(const KrausFamily& fam)
{
  if (fam.finite_r()) {
    Vec d(fam.dim);
    double t2 = std::pow(std::tanh(fam.r), 2);
    for (int j = 0; j < fam.dim; ++j) d[j] = std::pow(t2, j);
    return Mat(d.asDiagonal());
  }
  return Mat::Identity(fam.dim, fam.dim);
}

inline CompletenessReport completeness_defect(const KrausFamily& fam)
{
  int N = fam.dim;
  Mat S = Mat::Zero(N, N);
  for (const auto& t : fam.ops) {
    if (t.factored)
      S.noalias() += (t.weight * t.ket.squaredNorm()) * (t.bra * t.bra.adjoint());
    else
      S.noalias() += t.weight * (t.m.adjoint() * t.m);
  }
  CompletenessReport rep;
  rep.defect = S - completeness_target(fam);
  rep.max_abs_full = max_abs(rep.defect);
  bool quad = fam.kind == IndexKind::quadrature_1d || fam.kind == IndexKind::quadrature_2d;
  rep.interior_levels = quad ? N / 2 : N;
  rep.max_abs_interior = max_abs_block(rep.defect, rep.interior_levels);
  return rep;
}

}  // namespace gkraus
