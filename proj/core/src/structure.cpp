#include "elastoshock/structure.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "elastoshock/rng.hpp"

namespace elastoshock {

namespace {

struct Residual {
  const char* name;
  double tol;
  double worst = 0.0;
  void take(double r) { worst = std::max(worst, std::abs(r)); }
};

}  // namespace

StructureReport structure_report(const MaterialParams& p, std::size_t sample_count,
                                 GradScheme scheme, std::uint64_t seed) {
  if (sample_count < 1)
    throw std::invalid_argument("structure_report: sample_count must be >= 1");
  const bool is3d = (p.dim_mode == DimMode::Planar3D);
  const std::size_t n = p.n();
  std::mt19937_64 rng(seed ^ 0x1f2e3d4c5b6a7988ULL);

  // Leave radius margin for the FD stencil; skip the strip where the
  // rotational frames are conventional.
  auto sample_state = [&] {
    for (;;) {
      SystemState s;
      s.mode = p.dim_mode;
      s.phi = ball_point(rng, n, 2.0 * p.delta * 0.999);
      const double trans = is3d ? std::hypot(s.phi[1], s.phi[2]) : std::abs(s.phi[1]);
      if (trans < 1e-6) continue;
      return s;
    }
  };

  std::vector<Residual> res;
  if (is3d) {
    res = {
        {"gamma23^1 + gamma32^1", 1e-6},
        {"gamma45^1 + gamma54^1", 1e-6},
        {"c32^3", 1e-12},
        {"gamma32^3", 1e-6},
        {"gamma45^3", 1e-6},
        {"gamma54^3", 1e-6},
        {"c45^4", 1e-12},
        {"gamma45^4", 1e-6},
        {"gamma23^4", 1e-6},
        {"gamma32^4", 1e-6},
        {"gamma23^6", 1e-6},
        {"gamma32^6", 1e-6},
        {"gamma45^6", 1e-6},
        {"gamma54^6", 1e-6},
        {"-c23^2 + gamma23^2 - (l2-l3)(1 + (l3^2-l2^2)/(4 l2^2))", 1e-8},
        {"gamma45^2 + gamma54^2 - (l3-l2)^3/(4 l2^2)", 1e-8},
        {"-c54^5 + gamma54^5 - (l2-l3)(-l3/l2 + (l3^2-l2^2)/(4 l2^2))", 1e-8},
        {"gamma23^5 + gamma32^5 - (l2-l3)^3/(4 l2^2)", 1e-8},
        {"c22^2", 1e-12},
        {"c55^5", 1e-12},
        {"c66^6 + c11^1", 1e-10},
        {"genuine nonlinearity c11^1 < 0 < c66^6", 0.0},
        {"|lambda2 - lambda3| <= 0.01", 0.0},
    };
  } else {
    res = {
        {"genuine nonlinearity c11^1 < 0 < c44^4", 0.0},
        {"c44^4 + c11^1", 1e-10},
        {"c33^3 + c22^2", 1e-10},
    };
  }

  double sign_margin = 1e300;
  double max_gap = 0.0;

  for (std::size_t t = 0; t < sample_count; ++t) {
    const SystemState s = sample_state();
    const Spectrum sp = spectrum(s, p);
    const CouplingTable ct = coupling_table(s, p, scheme);
    const auto& c = ct.c;
    const auto& g = ct.gamma;

    if (is3d) {
      const double l2 = sp.lambda[1], l3 = sp.lambda[2];
      const double gap = l2 - l3;
      max_gap = std::max(max_gap, std::abs(gap));
      std::size_t i = 0;
      res[i++].take(g[0][1][2] + g[0][2][1]);
      res[i++].take(g[0][3][4] + g[0][4][3]);
      res[i++].take(c[2][1]);
      res[i++].take(g[2][2][1]);
      res[i++].take(g[2][3][4]);
      res[i++].take(g[2][4][3]);
      res[i++].take(c[3][4]);
      res[i++].take(g[3][3][4]);
      res[i++].take(g[3][1][2]);
      res[i++].take(g[3][2][1]);
      res[i++].take(g[5][1][2]);
      res[i++].take(g[5][2][1]);
      res[i++].take(g[5][3][4]);
      res[i++].take(g[5][4][3]);
      const double ratio = (l3 * l3 - l2 * l2) / (4.0 * l2 * l2);
      res[i++].take((-c[1][2] + g[1][1][2]) - gap * (1.0 + ratio));
      res[i++].take((g[1][3][4] + g[1][4][3]) - (-gap) * (-gap) * (-gap) / (4.0 * l2 * l2));
      res[i++].take((-c[4][3] + g[4][4][3]) - gap * (-l3 / l2 + ratio));
      res[i++].take((g[4][1][2] + g[4][2][1]) - gap * gap * gap / (4.0 * l2 * l2));
      res[i++].take(c[1][1]);
      res[i++].take(c[4][4]);
      res[i++].take(c[5][5] + c[0][0]);
      sign_margin = std::min(sign_margin, std::min(-c[0][0], c[5][5]));
    } else {
      sign_margin = std::min(sign_margin, std::min(-c[0][0], c[3][3]));
      res[1].take(c[3][3] + c[0][0]);
      res[2].take(c[2][2] + c[1][1]);
      max_gap = std::max(max_gap, std::abs(sp.lambda[1] - sp.lambda[2]));
    }
  }

  StructureReport rep;
  rep.sample_count = sample_count;
  rep.gradient_scheme = (scheme == GradScheme::FiniteDifference)
                            ? "central-fd(h=1e-6*max(1,|phi|), richardson-1)"
                            : "analytic";
  {
    SystemState origin;
    origin.mode = p.dim_mode;
    const Spectrum sp0 = spectrum(origin, p);
    const auto gl0 = grad_lambda(origin, p);
    rep.c11_origin = dot(gl0[0], sp0.right[0], n);
  }
  rep.sign_margin = sign_margin;
  rep.max_lambda_gap = max_gap;

  rep.all_pass = true;
  for (auto& r : res) {
    IdentityResult ir;
    ir.name = r.name;
    ir.max_residual = r.worst;
    if (r.tol > 0.0) {
      ir.tolerance = r.tol;
      ir.pass = r.worst <= r.tol;
    } else if (std::string(r.name).find("nonlinearity") != std::string::npos) {
      ir.tolerance = 0.0;
      ir.pass = sign_margin > 0.0;
      ir.max_residual = std::max(0.0, -sign_margin);
    } else {  // lambda gap bound
      ir.tolerance = 0.01;
      ir.pass = max_gap <= 0.01;
      ir.max_residual = max_gap;
    }
    rep.all_pass = rep.all_pass && ir.pass;
    rep.identities.push_back(std::move(ir));
  }
  return rep;
}

std::string StructureReport::to_json() const {
  nlohmann::ordered_json j;
  j["sample_count"] = sample_count;
  j["gradient_scheme"] = gradient_scheme;
  j["c11_origin"] = c11_origin;
  j["sign_margin"] = sign_margin;
  j["max_lambda_gap"] = max_lambda_gap;
  j["all_pass"] = all_pass;
  j["identities"] = nlohmann::ordered_json::array();
  for (const auto& id : identities) {
    nlohmann::ordered_json e;
    e["name"] = id.name;
    e["max_residual"] = id.max_residual;
    e["tolerance"] = id.tolerance;
    e["pass"] = id.pass;
    j["identities"].push_back(e);
  }
  return j.dump(2);
}

}  // namespace elastoshock
