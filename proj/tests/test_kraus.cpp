#include <catch2/catch_amalgamated.hpp>

#include <gkraus/kraus.hpp>

using namespace gkraus;

namespace {

Mat density(const Vec& amps) { return amps * amps.adjoint(); }

double family_distance(const KrausFamily& a, const KrausFamily& b, int n_lo, int n_hi,
                       int block)
{
  // max over shared indices n_lo..n_hi of the block-wise operator difference
  double d = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    const Mat& ma = a.ops[n].m;
    const Mat& mb = b.ops[n].m;
    int R = std::min({int(ma.rows()), int(mb.rows()), block});
    int C = std::min({int(ma.cols()), int(mb.cols()), block});
    d = std::max(d, max_abs(Mat(ma.topLeftCorner(R, C) - mb.topLeftCorner(R, C))));
  }
  return d;
}

}  // namespace

TEST_CASE("finite-r attenuator")
{
  SECTION("completeness law sum T^dag T = diag(tanh^2j r)")
  {
    for (double r : {1.0, 2.0}) {
      auto fam = attenuator_finite_r(r, 0.5, 70);
      auto rep = completeness_defect(fam);
      CHECK(rep.max_abs_full < 1e-9);
    }
  }
  SECTION("monotone convergence to the quantum-limited family")
  {
    // convergence is ~ (n+3) e^{-2r}: the window factor matters, so the
    // n <= 10 distance at r = 8 sits at 1.479e-6 while n <= 5 is under 1e-6
    const int N = 40;
    auto ql = attenuator_ql(0.5, N);
    double prev = std::numeric_limits<double>::infinity();
    double last = 0, narrow = 0;
    for (double r : {1.0, 2.0, 4.0, 8.0}) {
      auto fam = attenuator_finite_r(r, 0.5, N);
      last = family_distance(fam, ql, 0, 10, 30);
      narrow = family_distance(fam, ql, 0, 5, 30);
      CHECK(last < prev);
      prev = last;
    }
    CHECK(last < 2e-6);
    CHECK(narrow < 1e-6);
  }
  SECTION("r = 0 is rejected")
  {
    CHECK_THROWS_AS(attenuator_finite_r(0.0, 0.5, 20), std::invalid_argument);
  }
}

TEST_CASE("quantum-limited attenuator")
{
  SECTION("B_0 is diag(kappa^m)")
  {
    double k = 0.73;
    auto fam = attenuator_ql(k, 25);
    REQUIRE(fam.ops[0].n1 == 0);
    for (int m = 0; m < 25; ++m)
      CHECK(std::abs(fam.ops[0].m(m, m) - std::pow(k, m)) < 1e-14);
  }
  SECTION("kappa = 1 collapses to the identity")
  {
    auto fam = attenuator_ql(1.0, 15);
    REQUIRE(fam.ops.size() == 1);
    CHECK(max_abs(Mat(fam.ops[0].m - Mat::Identity(15, 15))) == 0.0);
  }
  SECTION("single-photon loss oracle")
  {
    auto fam = attenuator_ql(0.6, 20);
    Mat rho = density(fock_basis_state(1, 20).amps);
    Mat out = apply_kraus(fam, rho);
    CHECK(std::abs(out(0, 0) - 0.64) < 1e-14);
    CHECK(std::abs(out(1, 1) - 0.36) < 1e-14);
    CHECK(std::abs(out.trace() - 1.0) < 1e-14);
  }
  SECTION("coherent input stays coherent with scaled amplitude")
  {
    const int N = 60;
    double k = 0.6;
    cx b0(1.0, 0.0);
    auto fam = attenuator_ql(k, N);
    Mat out = apply_kraus(fam, density(coherent_state(b0, N).amps));
    Vec target = coherent_state(k * b0, N).amps;
    double fid = std::real(target.dot(out * target));
    CHECK(fid >= 1.0 - 1e-6);
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("finite-r amplifier")
{
  SECTION("completeness law with rectangular rows")
  {
    auto fam = amplifier_finite_r(1.0, 1.3, 30, 150);
    auto rep = completeness_defect(fam);
    CHECK(rep.max_abs_full < 1e-10);
  }
  SECTION("large r approaches the quantum-limited family")
  {
    const int N = 30;
    auto ql = amplifier_ql(1.3, N);
    auto fam = amplifier_finite_r(8.0, 1.3, N);
    CHECK(family_distance(fam, ql, 0, 5, 20) < 1e-6);
  }
  SECTION("kappa < 1 is rejected")
  {
    CHECK_THROWS_AS(amplifier_finite_r(1.0, 0.9, 20), std::invalid_argument);
  }
}

TEST_CASE("quantum-limited amplifier")
{
  SECTION("vacuum column oracle <n|A_n|0> = kappa^{-1} (sqrt(kappa^2-1)/kappa)^n")
  {
    double k = 1.4;
    auto fam = amplifier_ql(k, 20);
    double x = std::sqrt(k * k - 1) / k;
    for (int n = 0; n <= 6; ++n)
      CHECK(std::abs(fam.ops[n].m(n, 0) - std::pow(x, n) / k) < 1e-14);
  }
  SECTION("kappa = 1 collapses to the identity")
  {
    auto fam = amplifier_ql(1.0, 15);
    REQUIRE(fam.ops.size() == 1);
    CHECK(max_abs(Mat(fam.ops[0].m - Mat::Identity(15, 15))) == 0.0);
  }
  SECTION("completeness over the full rectangular rows")
  {
    auto rep = completeness_defect(amplifier_ql(1.4, 30, 200));
    CHECK(rep.max_abs_full < 1e-10);
  }
  SECTION("vacuum gains mean occupation kappa^2 - 1")
  {
    const int N = 60;
    auto fam = amplifier_ql(1.3, N);
    Mat out = apply_kraus(fam, density(fock_basis_state(0, N).amps));
    double nbar = 0;
    for (int j = 0; j < N; ++j) nbar += j * std::real(out(j, j));
    CHECK(std::abs(nbar - 0.69) < 1e-4);
    CHECK(std::abs(out.trace() - 1.0) < 1e-12);
  }
}

TEST_CASE("finite-r phase conjugation")
{
  SECTION("completeness law")
  {
    auto fam = phase_conj_finite_r(1.0, 0.8, 40, 120);
    auto rep = completeness_defect(fam);
    CHECK(rep.max_abs_full < 1e-10);
  }
  SECTION("large r approaches the quantum-limited family")
  {
    const int N = 30;
    auto ql = phase_conj_ql(0.8, N);
    auto fam = phase_conj_finite_r(8.0, 0.8, N);
    CHECK(family_distance(fam, ql, 0, 8, 30) < 1e-6);
  }
}

TEST_CASE("quantum-limited phase conjugation")
{
  SECTION("C_0 = (1+kappa^2)^{-1/2} |0><0|")
  {
    double k = 0.8;
    auto fam = phase_conj_ql(k, 20);
    const Mat& c0 = fam.ops[0].m;
    CHECK(std::abs(c0(0, 0) - 1 / std::sqrt(1 + k * k)) < 1e-14);
    CHECK(max_abs(c0) == Catch::Approx(1 / std::sqrt(1 + k * k)));
  }
  SECTION("entries are nonnegative and C_n has full row rank n+1")
  {
    double k = 0.7;
    auto fam = phase_conj_ql(k, 20);
    for (int n : {3, 5, 8}) {
      const Mat& c = fam.ops[n].m;
      CHECK(c.real().minCoeff() >= 0.0);
      Eigen::JacobiSVD<Mat> svd(c);
      REQUIRE(svd.singularValues().size() == n + 1);
      CHECK(svd.singularValues()(n) > 1e-10);
    }
  }
  SECTION("vacuum output is thermal with nbar = kappa^2")
  {
    const int N = 60;
    double k = 0.8;
    auto fam = phase_conj_ql(k, N);
    Mat out = apply_kraus(fam, density(fock_basis_state(0, N).amps));
    double nbar = 0;
    for (int j = 0; j < N; ++j) {
      nbar += j * std::real(out(j, j));
      double want = std::pow(k * k, j) / std::pow(1 + k * k, j + 1);
      CHECK(std::abs(out(j, j) - want) < 1e-12);
    }
    CHECK(std::abs(nbar - k * k) < 1e-10);
  }
  SECTION("completeness on the first 25 levels")
  {
    auto rep = completeness_defect(phase_conj_ql(0.8, 80, 80));
    CHECK(max_abs_block(rep.defect, 25) < 1e-7);
  }
}

TEST_CASE("noisy attenuator family")
{
  SECTION("quantum-limited noise degenerates to the single-index family")
  {
    const int N = 20;
    double k = 0.6;
    double a = quantum_limited_alpha(Family::C1, k);
    auto fam = noisy_family(Family::C1, k, a, N, 10, 10);
    for (const auto& t : fam.ops) {
      REQUIRE(t.n1 == 0);
      Mat want = attenuator_ql_op(k, t.n2, N);
      CHECK(max_abs(Mat(t.m - want)) < 1e-12);
    }
  }
  SECTION("completeness above the quantum-limited line")
  {
    auto fam = noisy_family(Family::C1, 0.7, 1.0, 70, 50, 50);
    auto rep = completeness_defect(fam);
    CHECK(max_abs_block(rep.defect, 20) < 1e-5);
  }
  SECTION("vacuum output is the expected thermal population")
  {
    const int N = 40;
    auto fam = noisy_family(Family::C1, 0.5, 1.35, N, 24, 36);
    Mat out = apply_kraus(fam, density(fock_basis_state(0, N).amps));
    double nbar = 0, offdiag = 0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        if (i == j)
          nbar += i * std::real(out(i, i));
        else
          offdiag = std::max(offdiag, std::abs(out(i, j)));
      }
    CHECK(offdiag < 1e-13);
    CHECK(std::abs(nbar - 0.3) < 1e-6);  // (kappa^2 + alpha - 1)/2
    CHECK(std::abs(out.trace() - 1.0) < 1e-8);
  }
  SECTION("degenerate and unphysical parameters are rejected")
  {
    CHECK_THROWS_AS(noisy_family(Family::C1, 1.0, 1.0, 20), std::invalid_argument);
    CHECK_THROWS_AS(noisy_family(Family::C1, 0.5, 0.5, 20), std::invalid_argument);
  }
}

TEST_CASE("noisy amplifier family")
{
  SECTION("quantum-limited noise degenerates to the single-index family")
  {
    const int N = 20;
    double k = 1.3;
    double a = quantum_limited_alpha(Family::C2, k);
    auto fam = noisy_family(Family::C2, k, a, N, 10, 10);
    for (const auto& t : fam.ops) {
      REQUIRE(t.n2 == 0);
      Mat want = amplifier_ql_op(k, t.n1, N);
      CHECK(max_abs(Mat(t.m - want.topRows(N))) < 1e-12);
    }
  }
  SECTION("completeness above the quantum-limited line")
  {
    auto fam = noisy_family(Family::C2, 1.2, 0.6, 60, 50, 40);
    auto rep = completeness_defect(fam);
    CHECK(max_abs_block(rep.defect, 15) < 1e-6);
  }
}

TEST_CASE("noisy phase conjugation family")
{
  SECTION("quantum-limited noise degenerates to the single-index family")
  {
    const int N = 20;
    double k = 0.8;
    double a = quantum_limited_alpha(Family::D, k);
    auto fam = noisy_family(Family::D, k, a, N, 8, 8);
    for (const auto& t : fam.ops) {
      REQUIRE(t.n2 == 0);
      Mat want = phase_conj_ql_op(k, t.n1, N);
      int R = t.m.rows();
      CHECK(max_abs(Mat(t.m - want.topRows(R))) < 1e-12);
    }
  }
  SECTION("completeness above the quantum-limited line")
  {
    auto fam = noisy_family(Family::D, 0.8, 1.8, 60, 64, 30);
    auto rep = completeness_defect(fam);
    CHECK(max_abs_block(rep.defect, 15) < 1e-6);
  }
  SECTION("kappa = 1 is allowed for phase conjugation")
  {
    auto fam = noisy_family(Family::D, 1.0, 2.5, 20, 10, 10);
    CHECK(!fam.ops.empty());
  }
}

TEST_CASE("rank-one entanglement-breaking families")
{
  Grid2D grid;  // defaults: |beta| <= 6, step 0.15

  SECTION("coherent resolution of the identity (B2)")
  {
    // dim 60 keeps the truncated-norm loss of the outer grid samples below
    // the quadrature floor (at dim 40 the corner states leak ~27% of norm)
    auto fam = eb_rank_one(Family::B2, 1.0, grid, 60);
    auto rep = completeness_defect(fam);
    CHECK(max_abs_block(rep.defect, 15) < 1e-4);
  }
  SECTION("B2 on vacuum gives the nbar = 1 thermal populations")
  {
    auto fam = eb_rank_one(Family::B2, 1.0, grid, 40);
    Mat out = apply_kraus(fam, density(fock_basis_state(0, 40).amps));
    CHECK(std::abs(out(0, 0) - 0.5) < 1e-4);
    CHECK(std::abs(out(1, 1) - 0.25) < 1e-4);
    CHECK(std::abs(out(2, 2) / out(1, 1) - 0.5) < 1e-3);
  }
  SECTION("A1 collapses every input to vacuum")
  {
    const int N = 40;
    auto fam = eb_rank_one(Family::A1, 0.0, grid, N);
    Mat out = apply_kraus(fam, thermal_state(3.0, N));
    CHECK(std::abs(out(0, 0) - 1.0) < 1e-6);
    Mat rest = out;
    rest(0, 0) = 0;
    CHECK(max_abs(rest) == 0.0);
  }
  SECTION("C1 threshold family scales the coherent amplitude")
  {
    const int N = 60;
    double k = 0.8;
    cx b0(1.0, 0.0);
    auto fam = eb_rank_one(Family::C1, k, grid, N);
    CHECK(fam.alpha == Catch::Approx(k * k + 1));
    Mat out = apply_kraus(fam, density(coherent_state(b0, N).amps));
    cx mean = (annihilation_op(N) * out).trace();
    CHECK(std::abs(mean - k * b0) < 1e-6);
  }
  SECTION("D threshold family conjugates the coherent amplitude")
  {
    const int N = 60;
    double k = 0.7;
    cx b0(1.0, 0.5);
    auto fam = eb_rank_one(Family::D, k, grid, N);
    Mat out = apply_kraus(fam, density(coherent_state(b0, N).amps));
    cx mean = (annihilation_op(N) * out).trace();
    CHECK(std::abs(mean - k * std::conj(b0)) < 1e-6);
  }
  SECTION("families without a rank-one coherent form are rejected")
  {
    CHECK_THROWS_AS(eb_rank_one(Family::A2, 0.0, grid, 20), std::invalid_argument);
    CHECK_THROWS_AS(eb_rank_one(Family::B1, 0.0, grid, 20), std::invalid_argument);
  }
}

TEST_CASE("position-measure coherent-prepare family")
{
  Grid1D grid;  // defaults: |x| <= 8, step 0.05
  const int N = 50;
  auto fam = a2_kraus(grid, N);

  SECTION("completeness integral dx A^dag A = 1")
  {
    auto rep = completeness_defect(fam);
    CHECK(max_abs_block(rep.defect, 15) < 1e-6);
  }
  SECTION("vacuum output second moments")
  {
    // q-variance doubles, p-variance stays at the vacuum level + 1/2 unit
    Mat out = apply_kraus(fam, density(fock_basis_state(0, N).amps));
    Mat q = q_op(N), p = p_op(N);
    double vq = 2 * std::real((out * q * q).trace());
    double vp = 2 * std::real((out * p * p).trace());
    CHECK(std::abs(out.trace() - 1.0) < 1e-8);
    CHECK(std::abs(vq - 2.0) < 1e-6);
    CHECK(std::abs(vp - 1.0) < 1e-6);
  }
}

TEST_CASE("single-quadrature classical noise family")
{
  Grid1D grid;
  const int N = 60;

  SECTION("weights renormalize to one and the family is complete")
  {
    auto fam = b1_kraus(0.8, grid, N);
    double tot = 0;
    for (const auto& t : fam.ops) tot += t.weight;
    CHECK(std::abs(tot - 1.0) < 1e-14);
    auto rep = completeness_defect(fam);
    CHECK(rep.max_abs_interior < 1e-7);
  }
  SECTION("vacuum gains q-variance alpha")
  {
    double a = 0.8;
    auto fam = b1_kraus(a, grid, N);
    Mat out = apply_kraus(fam, density(fock_basis_state(0, N).amps));
    Mat q = q_op(N), p = p_op(N);
    CHECK(std::abs(2 * std::real((out * q * q).trace()) - (1 + a)) < 1e-8);
    CHECK(std::abs(2 * std::real((out * p * p).trace()) - 1.0) < 1e-10);
    CHECK(std::abs((out * q).trace()) < 1e-10);
  }
  SECTION("alpha = 0 is the identity channel")
  {
    auto fam = b1_kraus(0.0, grid, 20);
    REQUIRE(fam.ops.size() == 1);
    Mat rho = density(coherent_state(cx(0.9, -0.4), 20).amps);
    CHECK(max_abs(Mat(apply_kraus(fam, rho) - rho)) == 0.0);
  }
}

TEST_CASE("composition of quantum-limited stages")
{
  const int N = 40;
  double k1 = 0.8, k2 = 1.25;
  auto att = attenuator_ql(k1, N);
  auto amp = amplifier_ql(k2, N);
  double alpha = k2 * k2 * (1 - k1 * k1) + k2 * k2 - 1;
  auto prod = compose(amp, att, make_channel(Family::B2, 0.0, alpha));

  SECTION("product family equals sequential application")
  {
    Mat rho = density(coherent_state(cx(0.7, 0.2), N).amps);
    Mat seq = apply_kraus(amp, apply_kraus(att, rho));
    Mat one = apply_kraus(prod, rho);
    CHECK(max_abs(Mat(one - seq)) < 1e-13);
  }
  SECTION("product family is complete on interior levels")
  {
    auto rep = completeness_defect(prod);
    CHECK(max_abs_block(rep.defect, 15) < 1e-8);
  }
}

TEST_CASE("apply_kraus validates the state dimension")
{
  auto fam = attenuator_ql(0.5, 20);
  Mat rho = Mat::Identity(19, 19);
  CHECK_THROWS_AS(apply_kraus(fam, rho), std::invalid_argument);
}
