#pragma once

// Acceptance gate: ten end-to-end checks with pinned parameters and
// tolerances, shared by the standalone acceptance binary and the CLI
// verification driver.  Each criterion prints one PASS/FAIL line; reports
// accumulate for JSON-lines / CSV export.

#include "verify.hpp"

#include <functional>
#include <iomanip>
#include <ostream>

namespace gkraus {

struct AcceptanceOutcome {
  int failures = 0;
  std::vector<VerificationReport> reports;
};

namespace detail {

struct CriterionPrinter {
  std::ostream& out;
  int id;
  void operator()(bool pass, const std::string& name, const std::string& summary) const
  {
    out << "[" << std::setw(2) << id << "/10] " << (pass ? "PASS  " : "FAIL  ") << std::left
        << std::setw(44) << name << std::right << summary << "\n";
  }
};

inline std::string sci(double v)
{
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

// max-abs difference between matching operators over the top-left block
inline double op_block_distance(const KrausFamily& a, const KrausFamily& b, int block)
{
  double worst = 0;
  size_t n = std::min(a.ops.size(), b.ops.size());
  for (size_t i = 0; i < n; ++i) {
    const Mat& ma = a.ops[i].m;
    const Mat& mb = b.ops[i].m;
    int rr = int(std::min(ma.rows(), mb.rows()));
    int cc = int(std::min(ma.cols(), mb.cols()));
    int br = std::min(rr, block), bc = std::min(cc, block);
    worst = std::max(worst, max_abs(Mat(ma.topLeftCorner(br, bc) - mb.topLeftCorner(br, bc))));
  }
  return worst;
}

}  // namespace detail

// 1. At finite squeezing the operator families resolve diag(tanh^{2j} r)
//    rather than the identity: sum T_n^dag T_n, built per-operator so the
//    long amplifier ladders never sit in memory at once.
inline void criterion_finite_r_completeness(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 80, j_cut = 30;
  double worst_diag = 0, worst_off = 0;
  for (double r : {0.5, 1.0, 2.0})
    for (double kap : {0.3, 0.7})
      for (int which = 0; which < 3; ++which) {
        Family tag = which == 0 ? Family::C1 : (which == 1 ? Family::C2 : Family::D);
        // gain must exceed one: amplifier legs run at the reciprocal kappa
        double k_use = which == 1 ? 1.0 / kap : kap;
        auto p = diag_params(make_channel(tag, k_use, quantum_limited_alpha(tag, k_use)), r);
        Mat S = Mat::Zero(N, N);
        int stale = 0;
        for (int n = 0; n <= 4000 && stale < 25; ++n) {
          Mat K = which == 0   ? attenuator_finite_r_op(p, n, N)
                  : which == 1 ? amplifier_finite_r_op(p, n, N)
                               : phase_conj_finite_r_op(p, n, N);
          int nb = int(std::min<Eigen::Index>(K.rows(), N));
          Mat band = K.bottomRows(nb);  // rows outside this window are zero
          double contrib = band.leftCols(j_cut + 1).squaredNorm();
          S.noalias() += band.adjoint() * band;
          stale = (contrib < 1e-14 && n >= N) ? stale + 1 : 0;
        }
        double t2 = std::pow(std::tanh(r), 2);
        double diag_err = 0;
        for (int j = 0; j <= j_cut; ++j)
          diag_err = std::max(diag_err, std::abs(S(j, j).real() - std::pow(t2, j)));
        Mat off = S;
        off.diagonal().setZero();
        double off_err = max_abs(off);
        worst_diag = std::max(worst_diag, diag_err);
        worst_off = std::max(worst_off, off_err);

        std::ostringstream ps;
        ps << family_name(tag) << " finite_r kappa=" << k_use << " r=" << r << " N=" << N;
        std::string note = which == 1 ? "reciprocal of the attenuation kappa grid" : "";
        acc.reports.push_back(make_report("finite_r_completeness_diag", ps.str(), "max_abs",
                                          diag_err, 1e-9, 0, note));
        acc.reports.push_back(make_report("finite_r_completeness_offdiag", ps.str(), "max_abs",
                                          off_err, 1e-10));
      }
  bool pass = worst_diag <= 1e-9 && worst_off <= 1e-10;
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 1}(pass, "finite-r completeness law",
                                   "worst diag " + detail::sci(worst_diag) + " (<=1e-9), off-diag " +
                                       detail::sci(worst_off) + " (<=1e-10)");
}

// 2. Quantum-limited ladder families are trace preserving on the interior.
inline void criterion_limit_trace_preservation(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 80, cutoff = 80, levels = 25;
  double worst = 0;
  auto leg = [&](const KrausFamily& fam) {
    auto rep = completeness_defect(fam);
    double v = max_abs_block(rep.defect, levels);
    worst = std::max(worst, v);
    std::ostringstream ps;
    ps << family_name(fam.family) << " limit kappa=" << fam.kappa << " N=" << N
       << " n_max=" << cutoff;
    acc.reports.push_back(
        make_report("limit_trace_preservation", ps.str(), "max_abs", v, 1e-6));
  };
  leg(attenuator_ql(0.6, N, cutoff));
  leg(amplifier_ql(1.4, N, cutoff));
  leg(phase_conj_ql(0.8, N, cutoff));
  bool pass = worst <= 1e-6;
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 2}(pass, "limit trace preservation",
                                   "worst defect " + detail::sci(worst) + " on first 25 levels (<=1e-6)");
}

// 3. Finite-r operators converge monotonically to the limit family over
//    r = 1, 2, 4, 8 and land within 1e-6 at r = 8 (kappa = 0.5, window
//    n <= 10, 30x30 block).
inline void criterion_convergence(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 40, n_win = 10, block = 30;
  const double kappa = 0.5;
  auto ql_att = attenuator_ql(kappa, N, n_win);
  auto ql_pc = phase_conj_ql(kappa, N, n_win);
  std::vector<double> rs{1, 2, 4, 8};
  std::vector<double> d_att, d_pc;
  for (double r : rs) {
    d_att.push_back(detail::op_block_distance(attenuator_finite_r(r, kappa, N, n_win), ql_att, block));
    d_pc.push_back(detail::op_block_distance(phase_conj_finite_r(r, kappa, N, n_win), ql_pc, block));
  }
  bool monotone = true;
  for (size_t i = 1; i < d_att.size(); ++i) monotone = monotone && d_att[i] < d_att[i - 1];
  double value = d_att.back();
  bool pass = monotone && value <= 1e-6;

  std::ostringstream ps;
  ps << "C1 kappa=" << kappa << " n<=" << n_win << " block=" << block << " r=1,2,4,8";
  std::ostringstream note;
  note << "deviation scales like (n+3)e^{-2r}, so the n<=10 window needs r >= 8.2 "
          "or a window n <= 6 to reach 1e-6; the conjugation-family analog gives "
       << detail::sci(d_pc.back()) << " and meets the bound";
  acc.reports.push_back(make_report("finite_r_convergence", ps.str(), "max_abs", value, 1e-6, 0,
                                    (monotone ? "monotone over r; " : "NOT monotone; ") + note.str()));
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 3}(pass, "finite-r convergence window",
                                   std::string(monotone ? "monotone; " : "NOT monotone; ") +
                                       "max|T_n(r=8) - limit| = " + detail::sci(value) + " (<=1e-6)");
  if (!pass)
    out << "        note: " << note.str() << "\n";
}

// 4. Every trace-preserving representation reproduces the phase-space map
//    X^T V X + Y on vacuum, coherent(1), thermal(2).  Finite-r families are
//    excluded: they resolve diag(tanh^{2j} r), not the identity, and are
//    covered by criteria 1, 3, and 5.
inline void criterion_oracle_equivalence(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 60;
  auto inputs = canonical_inputs(N);
  struct Leg {
    std::function<KrausFamily()> build;
    double tol;
  };
  std::vector<Leg> legs = {
      {[&] { return attenuator_ql(0.6, N); }, 1e-4},
      {[&] { return amplifier_ql(1.4, N); }, 1e-4},
      {[&] { return phase_conj_ql(0.8, N); }, 1e-4},
      {[&] { return noisy_family(Family::C1, 0.7, 1.0, N, 32, 48); }, 1e-4},
      {[&] { return noisy_family(Family::C2, 1.2, 0.6, N, 32, 24); }, 1e-4},
      {[&] { return noisy_family(Family::D, 0.8, 1.8, N, 32, 24); }, 1e-4},
      {[&] { return eb_rank_one(Family::C1, 0.8, Grid2D{}, N); }, 1e-3},
      {[&] { return eb_rank_one(Family::C2, 1.3, Grid2D{}, N); }, 1e-3},
      {[&] { return eb_rank_one(Family::D, 0.7, Grid2D{}, N); }, 1e-3},
      {[&] { return eb_rank_one(Family::B2, 1.0, Grid2D{}, N); }, 1e-3},
      {[&] { return eb_rank_one(Family::A1, 0.0, Grid2D{}, N); }, 1e-3},
      {[&] { return a2_kraus(Grid1D{}, N); }, 1e-3},
      {[&] { return b1_kraus(0.8, Grid1D{}, N); }, 1e-3},
  };
  bool pass = true;
  double worst_ratio = 0;
  std::string worst_leg;
  for (const auto& leg : legs) {
    KrausFamily fam = leg.build();  // scoped: one family in memory at a time
    for (const auto& in : inputs) {
      auto rep = oracle_equivalence(fam, in, leg.tol);
      pass = pass && rep.pass;
      if (rep.value / rep.tolerance > worst_ratio) {
        worst_ratio = rep.value / rep.tolerance;
        worst_leg = rep.params + " -> " + detail::sci(rep.value);
      }
      acc.reports.push_back(std::move(rep));
    }
  }
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 4}(pass, "oracle equivalence (13 families x 3 inputs)",
                                   "worst " + worst_leg);
}

// 5. Choi-probe covariance reconstruction at r = 0.8, including the
//    sigma3-vs-identity structure of the cross blocks.
inline void criterion_choi(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 60;
  const double r = 0.8;
  bool pass = true;
  double worst = 0;
  auto leg = [&](const KrausFamily& fam, bool conjugating) {
    auto rep = choi_cm_check(fam, r);
    worst = std::max(worst, rep.value);
    pass = pass && rep.pass;
    CovMat cm = choi_output_cm(fam, r);
    bool structure = conjugating ? (cm.m(0, 2) * cm.m(1, 3) > 0)   // block ~ identity
                                 : (cm.m(0, 2) * cm.m(1, 3) < 0);  // block ~ sigma3
    structure = structure && std::abs(cm.m(0, 3)) < 1e-6 && std::abs(cm.m(1, 2)) < 1e-6;
    if (!structure) {
      pass = false;
      rep.note += " cross-block structure mismatch";
    }
    acc.reports.push_back(std::move(rep));
  };
  leg(attenuator_ql(0.6, N), false);
  leg(amplifier_ql(1.3, N), false);
  leg(phase_conj_ql(0.8, N), true);
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 5}(pass, "choi-probe covariance reconstruction",
                                   "worst CM error " + detail::sci(worst) + " (<=1e-4)");
}

// 6. Complete-positivity and entanglement-breaking verdicts across the
//    (kappa, alpha) grid match the closed forms, boundary inclusive, at
//    every probe squeezing.
inline void criterion_thresholds(std::ostream& out, AcceptanceOutcome& acc)
{
  int mismatches = 0, points = 0;
  for (int ki = 3; ki <= 15; ++ki)
    for (int ai = 1; ai <= 35; ++ai) {
      double kappa = ki / 10.0, alpha = ai / 10.0;
      std::vector<Family> tags{Family::D};
      if (ki < 10) tags.push_back(Family::C1);
      if (ki > 10) tags.push_back(Family::C2);
      if (ki == 10) tags.push_back(Family::B2);
      for (Family tag : tags) {
        auto ch = make_channel(tag, kappa, alpha);
        double det_x = ch.X().determinant();
        double det_y = ch.Y().determinant();
        bool cp_closed = det_y >= std::pow(det_x - 1, 2) - 1e-12;
        ++points;
        if (is_cp(ch) != cp_closed) ++mismatches;
        if (!cp_closed) continue;
        bool eb_closed = alpha >= std::abs(det_x) + 1 - 1e-12;  // |det X| = kappa^2
        for (double r0 : {0.3, 1.0, 2.0})
          if (is_entanglement_breaking(ch, r0) != eb_closed) ++mismatches;
      }
    }
  bool pass = mismatches == 0;
  std::ostringstream ps;
  ps << "kappa=0.3..1.5 alpha=0.1..3.5 step 0.1, probes r=0.3,1,2, " << points << " channels";
  acc.reports.push_back(make_report("threshold_grid", ps.str(), "max_abs", double(mismatches), 0.5,
                                    0, "value counts verdict mismatches"));
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 6}(pass, "threshold classification grid",
                                   std::to_string(mismatches) + " mismatches over " +
                                       std::to_string(points) + " channels");
}

// 7. Rank-one coherent measure-prepare equals the double-index synthesis at
//    the breaking threshold.
inline void criterion_measure_prepare(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 60;
  std::vector<Mat> states;
  auto push_pure = [&](const Vec& v) { states.push_back(v * v.adjoint()); };
  push_pure(fock_basis_state(0, N).amps);
  push_pure(fock_basis_state(1, N).amps);
  push_pure(coherent_state(1.0, N).amps);
  bool pass = true;
  double worst = 0;
  for (double kappa : {0.5, 0.8, 1.3}) {
    auto rep = measure_prepare_equivalence(kappa, N, states, "|0>,|1>,|beta=1>");
    pass = pass && rep.pass;
    worst = std::max(worst, rep.value);
    acc.reports.push_back(std::move(rep));
  }
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 7}(pass, "measure-prepare equivalence at threshold",
                                   "worst trace distance " + detail::sci(worst) + " (<=1e-3)");
}

// 8. Sequential quantum-limited composition equals the direct family for the
//    resulting channel, and exactly one operator ordering matches.
inline void criterion_composition(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 40;
  std::vector<Mat> states;
  auto push_pure = [&](const Vec& v) { states.push_back(v * v.adjoint()); };
  push_pure(fock_basis_state(0, N).amps);
  push_pure(fock_basis_state(1, N).amps);
  push_pure(coherent_state(1.0, N).amps);
  bool pass = true;
  double worst = 0;
  std::string order;
  for (auto [k1, k2] : {std::pair{0.8, 1.25}, std::pair{0.6, 1.2}}) {
    auto res = composition_check(k1, k2, N, states);
    pass = pass && res.equivalence.pass && res.cm_oracle.pass;
    // the named ordering must be unambiguous
    pass = pass && res.matching_value < 1e-6 && res.reversed_value > 1e-3;
    worst = std::max(worst, res.equivalence.value);
    order = res.matching_order;
    acc.reports.push_back(res.equivalence);
    acc.reports.push_back(res.cm_oracle);
  }
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 8}(pass, "composition identity",
                                   "worst trace distance " + detail::sci(worst) +
                                       " (<=1e-6); matching order: " + order);
}

// 9. Beam-splitter purity probe separates coherent inputs from Fock inputs
//    by at least five orders of magnitude.
inline void criterion_lemma1(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 60;
  const double theta = M_PI / 4;
  double coh = lemma1_value(coherent_state(1.0, N).amps, theta);
  double f1 = lemma1_value(fock_basis_state(1, N).amps, theta);
  double f2 = lemma1_value(fock_basis_state(2, N).amps, theta);
  bool pass = coh <= 1e-8 && f1 >= 1e-3 && f2 >= 1e-3;
  acc.reports.push_back(lemma1_check(coherent_state(1.0, N).amps, theta, "coherent(1)", 1e-8));
  std::ostringstream ps;
  ps << "psi=|1>,|2> theta=" << theta << " N=" << N;
  acc.reports.push_back(make_report("lemma1_separation", ps.str(), "one_minus_purity",
                                    1e-3 / std::min(f1, f2), 1.0, 0,
                                    "value is 1e-3 / min(1-purity): <=1 iff both Fock probes "
                                    "exceed the 1e-3 floor; raw values " +
                                        detail::sci(f1) + ", " + detail::sci(f2)));
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 9}(pass, "beam-splitter purity separation",
                                   "coherent " + detail::sci(coh) + " (<=1e-8), Fock >= " +
                                       detail::sci(std::min(f1, f2)) + " (>=1e-3)");
}

// 10. The rank-deficient quadrature channel: position-POVM completeness and
//     the squeezed-looking vacuum output diag(2, 1).
inline void criterion_a2(std::ostream& out, AcceptanceOutcome& acc)
{
  const int N = 60;
  auto fam = a2_kraus(Grid1D{}, N);
  auto comp = completeness_defect(fam);
  double cval = max_abs_block(comp.defect, 15);
  acc.reports.push_back(make_report("a2_completeness", "A2 quadrature N=60 first 15 levels",
                                    "max_abs", cval, 1e-4));
  Mat vac = Mat::Zero(N, N);
  vac(0, 0) = 1.0;
  MomentDiagnostics diag;
  CovMat got = cm_from_density(apply_kraus(fam, vac), &diag);
  RMat want = RMat::Zero(2, 2);
  want(0, 0) = 2;
  want(1, 1) = 1;
  double cm_err = std::max(max_abs(RMat(got.m - want)), got.mean.cwiseAbs().maxCoeff());
  acc.reports.push_back(make_report("a2_vacuum_cm", "A2 quadrature N=60 vacuum", "cm_max_abs",
                                    cm_err, 1e-3, diag.trace_deficit));
  bool pass = cval <= 1e-4 && cm_err <= 1e-3;
  if (!pass) ++acc.failures;
  detail::CriterionPrinter{out, 10}(pass, "singular quadrature channel",
                                    "completeness " + detail::sci(cval) + " (<=1e-4), vacuum CM " +
                                        detail::sci(cm_err) + " (<=1e-3)");
}

inline AcceptanceOutcome run_acceptance(std::ostream& out)
{
  AcceptanceOutcome acc;
  criterion_finite_r_completeness(out, acc);
  criterion_limit_trace_preservation(out, acc);
  criterion_convergence(out, acc);
  criterion_oracle_equivalence(out, acc);
  criterion_choi(out, acc);
  criterion_thresholds(out, acc);
  criterion_measure_prepare(out, acc);
  criterion_composition(out, acc);
  criterion_lemma1(out, acc);
  criterion_a2(out, acc);
  out << (acc.failures == 0 ? "all 10 criteria passed"
                            : std::to_string(acc.failures) + " criterion(s) failed")
      << "\n";
  return acc;
}

}  // namespace gkraus
