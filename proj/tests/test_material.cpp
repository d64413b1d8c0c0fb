#include "doctest.h"

#include <stdexcept>

#include "elastoshock/material.hpp"
#include "elastoshock/state.hpp"
#include "test_support.hpp"

using namespace elastoshock;

TEST_CASE("sigma_from_gamma reproduces the reference coefficient set") {
  StoredEnergyCoeffs g;
  g.gamma11 = 1.0;
  g.gamma2 = -0.5;
  MaterialParams p = sigma_from_gamma(g);
  CHECK(p.c1 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p.c2 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.sigma0 == doctest::Approx(6.0));
  CHECK(p.sigma1 == doctest::Approx(2.0));
  CHECK(p.sigma2 == doctest::Approx(-1.0));
  CHECK(p.sigma3 == doctest::Approx(0.0));
  CHECK(p.sigma4 == doctest::Approx(4.0));
}

TEST_CASE("degenerate stored-energy coefficients are rejected") {
  StoredEnergyCoeffs g;
  g.gamma11 = 1.0;
  g.gamma2 = 0.25;  // must be negative
  CHECK_THROWS_AS(sigma_from_gamma(g), std::invalid_argument);

  g.gamma2 = -3.0;  // 2*gamma11 + gamma2 <= 0
  CHECK_THROWS_AS(sigma_from_gamma(g), std::invalid_argument);

  g.gamma2 = -0.5;
  g.gamma12 = 1.0;  // sigma1 = 0
  CHECK_THROWS_AS(sigma_from_gamma(g), std::invalid_argument);
}

TEST_CASE("material validation rejects bad speed ordering and zero nonlinearity") {
  MaterialParams p = testsup::default_material();
  CHECK_NOTHROW(p.validate());

  MaterialParams bad = p;
  bad.c2 = 3.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = p;
  bad.sigma0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = p;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // Amplitude ball so large the fast/slow ordering flips inside it.
  bad = p;
  bad.delta = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("aux scalars at reference and perturbed states") {
  MaterialParams p = testsup::default_material();
  SystemState s;

  AuxScalars x = aux_scalars(s, p);
  CHECK(x.a == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(x.b == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x.c == 0.0);
  CHECK(x.d == 0.0);
  CHECK(x.Delta == doctest::Approx(9.0).epsilon(1e-15));

  s.phi[0] = 0.01;
  x = aux_scalars(s, p);
  CHECK(x.a == doctest::Approx(3.98).epsilon(1e-15));
  CHECK(x.b == doctest::Approx(1.02).epsilon(1e-15));
}

TEST_CASE("coefficient matrix matches the displayed block layout") {
  MaterialParams p = testsup::default_material();
  SystemState s;
  s.phi = {0.004, -0.003, 0.002, 0.001, 0.0, -0.002};
  const AuxScalars x = aux_scalars(s, p);

  Mat6 expect{};
  expect[0][3] = -1.0;
  expect[1][4] = -1.0;
  expect[2][5] = -1.0;
  expect[3][0] = -x.a;
  expect[3][1] = -x.c;
  expect[3][2] = -x.d;
  expect[4][0] = -x.c;
  expect[4][1] = -x.b;
  expect[5][0] = -x.d;
  expect[5][2] = -x.b;

  const Mat6 A = coefficient_matrix(s, p);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) CHECK(A[i][j] == expect[i][j]);  // bit-for-bit
}

TEST_CASE("characteristic polynomial factorization agrees with a determinant oracle") {
  MaterialParams p = testsup::default_material();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    SystemState s = testsup::random_state(rng, p);
    const AuxScalars x = aux_scalars(s, p);
    const Mat6 A = coefficient_matrix(s, p);
    for (int j = 0; j < 4; ++j) {
      const double lam = 4.0 * u01(rng) - 2.0;
      Mat6 shifted = A;
      for (int i = 0; i < 6; ++i) shifted[i][i] -= lam;
      // det(A - lam I) = (-1)^6 det(lam I - A)
      const double det = testsup::det_block(shifted, 6);
      CHECK(char_poly(lam, x, DimMode::Planar3D) ==
            doctest::Approx(det).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("2D coefficient matrix is the reduced block form") {
  MaterialParams p = testsup::default_material(DimMode::Planar2D);
  SystemState s;
  s.mode = DimMode::Planar2D;
  s.phi = {0.004, -0.003, 0.001, 0.002, 0.0, 0.0};
  const AuxScalars x = aux_scalars(s, p);
  CHECK(x.d == 0.0);

  const Mat6 A = coefficient_matrix(s, p);
  CHECK(A[0][2] == -1.0);
  CHECK(A[1][3] == -1.0);
  CHECK(A[2][0] == -x.a);
  CHECK(A[2][1] == -x.c);
  CHECK(A[3][0] == -x.c);
  CHECK(A[3][1] == -x.b);
  // everything outside the 4x4 block stays zero
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i >= 4 || j >= 4) CHECK(A[i][j] == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    SystemState t = testsup::random_state(rng, p);
    const AuxScalars y = aux_scalars(t, p);
    const Mat6 B = coefficient_matrix(t, p);
    const double lam = 4.0 * u01(rng) - 2.0;
    Mat6 shifted = B;
    for (int i = 0; i < 4; ++i) shifted[i][i] -= lam;
    const double det = testsup::det_block(shifted, 4);
    CHECK(char_poly(lam, y, DimMode::Planar2D) ==
          doctest::Approx(det).epsilon(1e-9).scale(1.0));
  }
}
