#include <catch2/catch_amalgamated.hpp>

#include <gkraus/fock.hpp>

using namespace gkraus;

TEST_CASE("coherent states")
{
  SECTION("beta = 0 is vacuum")
  {
    auto st = coherent_state(0.0, 20);
    CHECK(std::abs(st.amps[0] - 1.0) < 1e-15);
    CHECK(st.amps.tail(19).norm() == 0.0);
    CHECK(st.leakage == 0.0);
  }
  SECTION("beta = 1 first excited amplitude")
  {
    auto st = coherent_state(1.0, 30);
    CHECK(std::abs(st.amps[1]) == Catch::Approx(0.6065306597126334).epsilon(1e-12));
    CHECK_FALSE(st.leak_warn);
  }
  SECTION("overlap oracle <b1|b2> = exp(-(|b1|^2+|b2|^2)/2 + conj(b1) b2)")
  {
    const int N = 60;
    std::vector<cx> bs = {cx(0.5, 0), cx(1.0, -1.0), cx(-0.3, 1.7), cx(2.0, 0.1)};
    for (auto b1 : bs)
      for (auto b2 : bs) {
        cx num = coherent_state(b1, N).amps.dot(coherent_state(b2, N).amps);
        cx want = std::exp(-0.5 * (std::norm(b1) + std::norm(b2)) + std::conj(b1) * b2);
        CHECK(std::abs(num - want) < 1e-10);
      }
  }
  SECTION("leakage warning fires for undersized truncation")
  {
    CHECK(coherent_state(3.0, 10).leak_warn);
  }
}

TEST_CASE("thermal states")
{
  SECTION("nu = 1 is vacuum")
  {
    auto rho = thermal_state(1.0, 15);
    CHECK(std::abs(rho(0, 0) - 1.0) < 1e-15);
    CHECK(max_abs(Mat(rho.bottomRightCorner(14, 14))) == 0.0);
  }
  SECTION("nu = 3 has weights 2^{-n-1}")
  {
    auto rho = thermal_state(3.0, 12);
    for (int n = 0; n < 12; ++n)
      CHECK(std::real(rho(n, n)) == Catch::Approx(std::pow(2.0, -n - 1)).epsilon(1e-12));
  }
  SECTION("mean photon number (nu-1)/2 up to the geometric tail")
  {
    const int N = 80;
    for (double nu : {1.0, 2.0, 3.5}) {
      auto rho = thermal_state(nu, N);
      double nbar = 0;
      for (int n = 0; n < N; ++n) nbar += n * std::real(rho(n, n));
      double x2 = (nu - 1) / (nu + 1);
      double tail = std::pow(x2, N);  // bound on the lost weight
      CHECK(std::abs(nbar - (nu - 1) / 2) < N * tail + 1e-12);
    }
  }
}

TEST_CASE("two-mode squeezer matrix elements")
{
  SECTION("mu = 0 is the identity")
  {
    CHECK(tms_matrix_element(0, 3, 5, 3, 5) == Catch::Approx(1.0));
    CHECK(tms_matrix_element(0, 2, 4, 3, 5) == 0.0);
    CHECK(tms_matrix_element(0, 4, 6, 3, 5) == 0.0);
  }
  SECTION("ladder selection rule m2 - m1 = n2 - n1")
  {
    CHECK(tms_matrix_element(0.7, 2, 4, 1, 2) == 0.0);
    CHECK(tms_matrix_element(0.7, 2, 3, 1, 2) != 0.0);
  }
  SECTION("n1 = 0 column reduces to the single-index ladder")
  {
    double mu = 0.83;
    for (int n = 0; n <= 4; ++n)
      for (int m = 0; m <= 6; ++m) {
        double want = sqrt_binom(m + n, n) * std::pow(std::tanh(mu), m) /
                      std::pow(std::cosh(mu), n + 1);
        CHECK(tms_matrix_element(mu, m, m + n, 0, n) ==
              Catch::Approx(want).margin(1e-14));
      }
  }
  SECTION("columns are orthonormal (unitarity)")
  {
    const int N = 80;
    double mu = 0.5;
    int pairs[][2] = {{0, 0}, {1, 0}, {0, 3}, {2, 2}, {3, 5}, {5, 3}};
    for (auto& p : pairs) {
      int n1 = p[0], n2 = p[1];
      double norm2 = 0;
      for (int m1 = 0; m1 < N; ++m1) {
        int m2 = n2 + m1 - n1;
        if (m2 < 0 || m2 >= N) continue;
        double e = tms_matrix_element(mu, m1, m2, n1, n2);
        norm2 += e * e;
      }
      CHECK(norm2 == Catch::Approx(1.0).margin(1e-8));
    }
    // orthogonality of two columns on the same ladder
    double dot = 0;
    for (int m1 = 0; m1 < N; ++m1) {
      if (m1 + 1 >= N) continue;
      dot += tms_matrix_element(mu, m1, m1 + 1, 2, 3) *
             tms_matrix_element(mu, m1, m1 + 1, 4, 5);
    }
    CHECK(std::abs(dot) < 1e-8);
  }
}

TEST_CASE("beamsplitter matrix elements")
{
  SECTION("theta = 0 is the identity")
  {
    CHECK(bs_matrix_element(0, 2, 3, 2, 3) == Catch::Approx(1.0));
    CHECK(bs_matrix_element(0, 3, 2, 2, 3) == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("photon-number shell selection")
  {
    CHECK(bs_matrix_element(0.6, 1, 1, 1, 2) == 0.0);
  }
  SECTION("single photon splits as (cos, -sin)")
  {
    double t = M_PI / 4;
    CHECK(bs_matrix_element(t, 1, 0, 1, 0) == Catch::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(bs_matrix_element(t, 0, 1, 1, 0) == Catch::Approx(-std::sin(t)).epsilon(1e-12));
  }
  SECTION("n2 = 0 reduces to the binomial row")
  {
    double t = 0.37;
    int n = 5;
    for (int m = 0; m <= n; ++m) {
      double want = sqrt_binom(n, m) * std::pow(-std::sin(t), m) *
                    std::pow(std::cos(t), n - m);
      CHECK(bs_matrix_element(t, n - m, m, n, 0) ==
            Catch::Approx(want).margin(1e-14));
    }
  }
  SECTION("columns are orthonormal (exact finite sums)")
  {
    double t = 0.9;
    int pairs[][2] = {{0, 0}, {2, 0}, {1, 3}, {4, 4}, {6, 2}};
    for (auto& p : pairs) {
      int n1 = p[0], n2 = p[1], shell = n1 + n2;
      double norm2 = 0;
      for (int m2 = 0; m2 <= shell; ++m2) {
        double e = bs_matrix_element(t, shell - m2, m2, n1, n2);
        norm2 += e * e;
      }
      CHECK(norm2 == Catch::Approx(1.0).margin(1e-10));
    }
    double dot = 0;
    for (int m2 = 0; m2 <= 6; ++m2)
      dot += bs_matrix_element(t, 6 - m2, m2, 2, 4) *
             bs_matrix_element(t, 6 - m2, m2, 5, 1);
    CHECK(std::abs(dot) < 1e-10);
  }
}

TEST_CASE("displacement operator")
{
  SECTION("beta = 0 is the identity")
  {
    CHECK(max_abs(Mat(displacement_operator(0.0, 25) - Mat::Identity(25, 25))) <
          1e-14);
  }
  SECTION("D(beta)|0> is the coherent state")
  {
    const int N = 60;
    for (cx b : {cx(1.0, 0.0), cx(0.4, -1.2)}) {
      Vec col = displacement_operator(b, N).col(0);
      CHECK((col - coherent_state(b, N).amps).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SECTION("vacuum expectation e^{-|b|^2/2}")
  {
    for (cx b : {cx(0.7, 0.2), cx(-1.1, 1.3)}) {
      cx got = displacement_operator(b, 50)(0, 0);
      CHECK(std::abs(got - std::exp(-0.5 * std::norm(b))) < 1e-12);
    }
  }
  SECTION("unitary on interior levels")
  {
    const int N = 60;
    Mat D = displacement_operator(cx(0.9, -0.5), N);
    Mat G = D.adjoint() * D;
    CHECK(max_abs_block(Mat(G - Mat::Identity(N, N)), 30) < 1e-10);
  }
}

TEST_CASE("position amplitudes")
{
  SECTION("ground state at the origin is pi^{-1/4}")
  {
    CHECK(position_amplitude(0, 0.0) ==
          Catch::Approx(0.7511255444649425).epsilon(1e-12));
  }
  SECTION("odd states vanish at the origin")
  {
    CHECK(position_amplitude(1, 0.0) == 0.0);
    CHECK(std::abs(position_amplitude(7, 0.0)) < 1e-15);
  }
  SECTION("quadrature normalization for n <= 10")
  {
    Grid1D g;  // |x| <= 8, step 0.05
    auto xs = g.points();
    for (int n = 0; n <= 10; ++n) {
      double acc = 0;
      for (double x : xs) {
        double a = position_amplitude(n, x);
        acc += a * a * g.step;
      }
      CHECK(acc == Catch::Approx(1.0).margin(1e-8));
    }
  }
}
