#include <cmath>

#include "doctest.h"
#include "elastoshock/coupling.hpp"
#include "elastoshock/structure.hpp"
#include "test_support.hpp"

#include <nlohmann/json.hpp>

using namespace elastoshock;

namespace {

// Random state with a floor on the transverse magnitude, so the rotational
// families sit safely away from their conventional-direction strip.
SystemState away_from_strip(std::mt19937_64& rng, const MaterialParams& p, double fraction,
                            double min_trans) {
  for (;;) {
    SystemState s = testsup::random_state(rng, p, fraction);
    const double trans = (p.dim_mode == DimMode::Planar3D)
                             ? std::hypot(s.phi[1], s.phi[2])
                             : std::abs(s.phi[1]);
    if (trans >= min_trans) return s;
  }
}

double max_abs_diff(const Mat6& A, const Mat6& B, std::size_t n) {
  double worst = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) worst = std::max(worst, std::abs(A[r][c] - B[r][c]));
  return worst;
}

}  // namespace

TEST_CASE("eigenvector gradients contract rotational and parallel frames as displayed") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  std::mt19937_64 rng(301);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemState s = away_from_strip(rng, p, 0.9, 1e-3);
    const Spectrum sp = spectrum(s, p);
    const AuxScalars x = aux_scalars(s, p);
    const double phi2 = s.phi[1], phi3 = s.phi[2];
    const double l2 = sp.lambda[1], l3 = sp.lambda[2];
    const double ratio = (l3 * l3 - x.b) / (2.0 * l2);

    const Vec6 col23 = matvec(grad_eigenvector(s, p, 1), sp.right[2], 6);
    const Vec6 want23{0.0, phi3, -phi2, 0.0, -l2 * phi3 - phi3 * ratio,
                      l2 * phi2 + phi2 * ratio};
    const Vec6 col54 = matvec(grad_eigenvector(s, p, 4), sp.right[3], 6);
    const Vec6 want54{0.0, phi3, -phi2, 0.0, l2 * phi3 + phi3 * ratio,
                      -l2 * phi2 - phi2 * ratio};
    const Vec6 col32 = matvec(grad_eigenvector(s, p, 2), sp.right[1], 6);
    const Vec6 want32{0.0, phi3, -phi2, 0.0, -l3 * phi3, l3 * phi2};
    const Vec6 col45 = matvec(grad_eigenvector(s, p, 3), sp.right[4], 6);
    const Vec6 want45{0.0, phi3, -phi2, 0.0, l3 * phi3, -l3 * phi2};
    for (std::size_t r = 0; r < 6; ++r) {
      CHECK(std::abs(col23[r] - want23[r]) < 1e-7);
      CHECK(std::abs(col54[r] - want54[r]) < 1e-7);
      CHECK(std::abs(col32[r] - want32[r]) < 1e-7);
      CHECK(std::abs(col45[r] - want45[r]) < 1e-7);
    }
  }
}

TEST_CASE("finite-difference and closed-form Jacobians agree") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  std::mt19937_64 rng(302);
  for (int trial = 0; trial < 50; ++trial) {
    const SystemState s = away_from_strip(rng, p, 0.9, 1e-4);
    for (std::size_t k = 0; k < 6; ++k) {
      const Mat6 fd = grad_eigenvector(s, p, k, GradScheme::FiniteDifference);
      const Mat6 an = grad_eigenvector(s, p, k, GradScheme::Analytic);
      CHECK(max_abs_diff(fd, an, 6) < 1e-6);
    }
  }
}

TEST_CASE("Jacobian agreement holds down to the origin in a fixed chart") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  SystemState s;
  s.mode = DimMode::Planar3D;
  s.phi[1] = 0.6e-4;
  s.phi[2] = 0.8e-4;
  for (std::size_t k = 0; k < 6; ++k) {
    const Mat6 fd = grad_eigenvector(s, p, k, GradScheme::FiniteDifference);
    const Mat6 an = grad_eigenvector(s, p, k, GradScheme::Analytic);
    CHECK(max_abs_diff(fd, an, 6) < 1e-6);
  }
}

TEST_CASE("two-dimensional Jacobians agree across schemes") {
  const MaterialParams p = testsup::default_material(DimMode::Planar2D);
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemState s = testsup::random_state(rng, p, 0.9);
    for (std::size_t k = 0; k < 4; ++k) {
      const Mat6 fd = grad_eigenvector(s, p, k, GradScheme::FiniteDifference);
      const Mat6 an = grad_eigenvector(s, p, k, GradScheme::Analytic);
      CHECK(max_abs_diff(fd, an, 4) < 1e-6);
    }
  }
}

TEST_CASE("coupling table reference values") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);

  SUBCASE("leading self-interaction at the origin") {
    SystemState origin;
    origin.mode = DimMode::Planar3D;
    const CouplingTable ct = coupling_table(origin, p);
    CHECK(std::abs(ct.c[0][0] - (-0.75)) < 1e-12);
    CHECK(std::abs(ct.c[5][5] - 0.75) < 1e-12);
  }

  SUBCASE("rotational families are linearly degenerate, opposite leads mirror") {
    std::mt19937_64 rng(304);
    for (int trial = 0; trial < 100; ++trial) {
      const SystemState s = testsup::random_state(rng, p, 0.99);
      const CouplingTable ct = coupling_table(s, p);
      CHECK(ct.c[1][1] == 0.0);
      CHECK(ct.c[4][4] == 0.0);
      CHECK(std::abs(ct.c[5][5] + ct.c[0][0]) < 1e-10);
    }
  }
}

TEST_CASE("gamma tables agree between schemes") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  std::mt19937_64 rng(305);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemState s = away_from_strip(rng, p, 0.9, 1e-4);
    const CouplingTable fd = coupling_table(s, p, GradScheme::FiniteDifference);
    const CouplingTable an = coupling_table(s, p, GradScheme::Analytic);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(max_abs_diff(fd.gamma[i], an.gamma[i], 6) < 1e-6);
    CHECK(max_abs_diff(fd.c, an.c, 6) == 0.0);
  }
}

TEST_CASE("per-family coupling matches the full table") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  std::mt19937_64 rng(306);
  for (int trial = 0; trial < 25; ++trial) {
    const SystemState s = away_from_strip(rng, p, 1.0, 1e-6);
    const Spectrum sp = spectrum(s, p);
    const CouplingTable ct = coupling_table(s, p, GradScheme::Analytic);
    for (std::size_t i = 0; i < 6; ++i) {
      const FamilyCoupling fc = family_coupling(s, p, sp, i);
      for (std::size_t m = 0; m < 6; ++m) CHECK(fc.c_row[m] == ct.c[i][m]);
      CHECK(max_abs_diff(fc.gamma, ct.gamma[i], 6) == 0.0);
    }
  }
}

TEST_CASE("structure report validates every cancellation identity") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  const StructureReport rep = structure_report(p, 500, GradScheme::FiniteDifference, 0);
  CHECK(rep.all_pass);
  CHECK(rep.sample_count == 500);
  CHECK(rep.identities.size() == 23);
  CHECK(std::abs(rep.c11_origin - (-0.75)) < 1e-12);
  CHECK(rep.sign_margin > 0.0);
  CHECK(rep.max_lambda_gap <= 0.01);
  for (const auto& id : rep.identities) {
    INFO(id.name);
    CHECK(id.pass);
    CHECK(id.max_residual >= 0.0);
  }

  const auto j = nlohmann::json::parse(rep.to_json());
  CHECK(j["all_pass"].get<bool>());
  CHECK(j["identities"].size() == 23);
  CHECK(j["sample_count"].get<std::size_t>() == 500);
}

TEST_CASE("structure report in two dimensions") {
  const MaterialParams p = testsup::default_material(DimMode::Planar2D);
  const StructureReport rep = structure_report(p, 200, GradScheme::FiniteDifference, 0);
  CHECK(rep.all_pass);
  CHECK(rep.sign_margin > 0.0);
  CHECK(rep.c11_origin < 0.0);
}

TEST_CASE("small-gap identity evaluates to its cubic closed form") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  SystemState s;
  s.mode = DimMode::Planar3D;
  s.phi[1] = 0.003;
  s.phi[2] = 0.004;
  const Spectrum sp = spectrum(s, p);
  const CouplingTable ct = coupling_table(s, p, GradScheme::Analytic);
  const double l2 = sp.lambda[1], l3 = sp.lambda[2];
  const double lhs = ct.gamma[1][3][4] + ct.gamma[1][4][3];
  const double rhs = (l3 - l2) * (l3 - l2) * (l3 - l2) / (4.0 * l2 * l2);
  CHECK(std::abs(lhs - rhs) < 1e-8);
}

TEST_CASE("coincident-speed pairs carry exactly zero coupling on the slice") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);
  for (const double phi1 : {0.0, 0.004, -0.009}) {
    SystemState s;
    s.mode = DimMode::Planar3D;
    s.phi[0] = phi1;
    const CouplingTable ct = coupling_table(s, p, GradScheme::Analytic);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(ct.gamma[i][1][2] == 0.0);
      CHECK(ct.gamma[i][2][1] == 0.0);
      CHECK(ct.gamma[i][3][4] == 0.0);
      CHECK(ct.gamma[i][4][3] == 0.0);
    }
  }
}

TEST_CASE("two-dimensional self-interactions are nonzero and mirrored") {
  const MaterialParams p = testsup::default_material(DimMode::Planar2D);
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 100; ++trial) {
    const SystemState s = testsup::random_state(rng, p, 0.99);
    const CouplingTable ct = coupling_table(s, p);
    CHECK(ct.c[0][0] < 0.0);
    CHECK(std::abs(ct.c[3][3] + ct.c[0][0]) < 1e-10);
    CHECK(std::abs(ct.c[2][2] + ct.c[1][1]) < 1e-10);
  }
}

TEST_CASE("gradient preconditions reject unusable stencils") {
  const MaterialParams p = testsup::default_material(DimMode::Planar3D);

  SystemState on_axis;
  on_axis.mode = DimMode::Planar3D;
  on_axis.phi[0] = 0.005;
  CHECK_THROWS_AS((void)grad_eigenvector(on_axis, p, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)grad_eigenvector(on_axis, p, 4), std::invalid_argument);
  CHECK_NOTHROW((void)grad_eigenvector(on_axis, p, 1, GradScheme::Analytic));
  CHECK_NOTHROW((void)grad_eigenvector(on_axis, p, 0));

  SystemState rim;
  rim.mode = DimMode::Planar3D;
  rim.phi[0] = 2.0 * p.delta;
  CHECK_THROWS_AS((void)grad_eigenvector(rim, p, 0), std::invalid_argument);

  SystemState ok;
  ok.mode = DimMode::Planar3D;
  CHECK_THROWS_AS((void)grad_eigenvector(ok, p, 6), std::invalid_argument);

  // Full table still evaluates inside the strip: rotational rows switch to the
  // regularized products there.
  CHECK_NOTHROW((void)coupling_table(on_axis, p));
}

TEST_CASE("sign convention gate accepts the default and rejects its mirror") {
  MaterialParams p = testsup::default_material(DimMode::Planar3D);
  CHECK_NOTHROW(validate_sign_convention(p));
  p.sigma0 = 1.0;
  p.validate();
  CHECK_THROWS_AS(validate_sign_convention(p), std::invalid_argument);
  MaterialParams q = testsup::default_material(DimMode::Planar2D);
  CHECK_NOTHROW(validate_sign_convention(q));
}
