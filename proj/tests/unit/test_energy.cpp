#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "lpwave/energy.hpp"
#include "lpwave/errors.hpp"

using namespace lpwave;

namespace {

constexpr double kPi = std::numbers::pi;

EnergyConfig identity_config(double gamma, int mu) {
  EnergyConfig cfg;
  cfg.gamma = gamma;
  cfg.mu = mu;
  cfg.beta = 0.5;
  cfg.horizon = 0.5;
  return cfg;
}

}  // namespace

TEST(EnergyConfig, Validation) {
  EnergyConfig c;
  c.theta = 1.5;
  EXPECT_THROW(c.validate(), ConfigurationError);
  c.theta = 0.5;
  c.beta = 1.0;
  c.horizon = 1.0;
  // 0.5 + 1 / ln 2 > 1
  EXPECT_THROW(c.validate(), ConfigurationError);
  c.horizon = 0.3;
  EXPECT_NO_THROW(c.validate());
  EXPECT_NEAR(c.beta_star(), 1.0 / std::log(2.0), 1e-15);
  EXPECT_EQ(default_nu_max(TorusGrid(1, 512)), 8);
  EXPECT_EQ(default_nu_max(TorusGrid(1, 64)), 5);
}

TEST(BlockEnergy, IdentityCoefficientClosedForm) {
  const TorusGrid g(1, 256);
  const double gamma = 4.0;
  const EnergyFunctional ef(constant_coefficients(1, {1.0, 0.0, 0.0}), identity_config(gamma, 0), g);
  for (int nu : {0, 1, 3, 5}) {
    const auto u = SpectralField::mode(g, {1 << nu, 0});
    const auto c = tarama_components(ef, u, SpectralField::zero(g), nu, 0.2);
    // alpha = 1, so v = 0, w = Lambda u_nu, z = u_nu.
    const double exact = (gamma * gamma + std::pow(4.0, nu) + 1.0) * 2 * kPi;
    EXPECT_NEAR(block_energy(c.v, c.w, c.z), exact, 1e-12 * exact);
  }
}

TEST(BlockEnergy, VelocityEntersThroughV) {
  const TorusGrid g(1, 128);
  const EnergyFunctional ef(constant_coefficients(1, {1.0, 0.0, 0.0}), identity_config(1.0, -2), g);
  const auto ut = SpectralField::mode(g, {8, 0}, 3.0);
  const auto be = block_energies(ef, SpectralField::zero(g), ut, 0.0);
  for (int nu = 0; nu <= ef.nu_max(); ++nu) EXPECT_NEAR(be.e[nu], nu == 3 ? 9.0 * 2 * kPi : 0.0, 1e-12);
}

TEST(BlockEnergy, TailFractionOfTruncatedBlocks) {
  const TorusGrid g(1, 128);
  auto cfg = identity_config(1.0, -2);
  cfg.nu_max = 2;
  const EnergyFunctional ef(constant_coefficients(1, {1.0, 0.0, 0.0}), cfg, g);
  const auto u = SpectralField::mode(g, {1, 0}) + SpectralField::mode(g, {16, 0});
  const auto be = block_energies(ef, u, SpectralField::zero(g), 0.0);
  EXPECT_NEAR(be.tail_fraction, std::sqrt(0.5), 1e-12);
  EXPECT_TRUE(be.truncation_warning);
}

TEST(BlockEnergy, ThreadedMatchesSerial) {
  const TorusGrid g(1, 256);
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_depth = 6;
  p.space_depth = 5;
  EnergyFunctional ef(make_coefficients(p), identity_config(1.0, -2), g);
  std::mt19937_64 rng(3);
  const auto u = random_real_field(g, rng, [](double r) { return r < 80 ? 1.0 / (1.0 + r) : 0.0; });
  const auto v = random_real_field(g, rng, [](double r) { return r < 80 ? 1.0 / (1.0 + r) : 0.0; });
  const auto serial = block_energies(ef, u, v, 0.1);
  ef.set_threads(3);
  const auto threaded = block_energies(ef, u, v, 0.1);
  EXPECT_EQ(serial.e, threaded.e);
  EXPECT_THROW(ef.set_threads(0), ConfigurationError);
}

TEST(Weights, FormulaAndMonotonicity) {
  EXPECT_NEAR(energy_weight(0.3, 0.5, 2, 0.7), std::exp(-2 * 0.3 * 3 * 0.7) * std::pow(2.0, -2.0), 1e-15);
  for (int nu = 0; nu < 8; ++nu) {
    EXPECT_LT(energy_weight(0.2, 0.5, nu + 1, 0.3), energy_weight(0.2, 0.5, nu, 0.3));
    EXPECT_LT(energy_weight(0.2, 0.5, nu, 0.4), energy_weight(0.2, 0.5, nu, 0.3));
  }
  const std::vector<double> e{1.0, 2.0, 3.0};
  double sum = 0.0;
  for (int nu = 0; nu < 3; ++nu) sum += energy_weight(0.1, 0.25, nu, 0.2) * e[nu];
  EXPECT_NEAR(weighted_energy(e, 0.1, 0.25, 0.2), sum, 1e-15);
}

TEST(Norms, TorusSobolevOfMode) {
  const TorusGrid g(1, 64);
  const auto u = SpectralField::mode(g, {3, 0}, 2.0);
  EXPECT_NEAR(torus_sobolev_norm(u, 0.5), 2.0 * std::pow(10.0, 0.25) * std::sqrt(2 * kPi), 1e-12);
}

namespace {

struct ConstantRun {
  Trajectory traj;
  EnergyTrace trace;
};

// The trace keeps a pointer to the trajectory, so the run is filled in place.
void constant_run(ConstantRun& r, const EnergyFunctional& ef, const SpectralField& u0) {
  r.traj = solve({ef.coefficients(), u0, SpectralField::zero(u0.grid()), {}, 0.4});
  r.trace = trace_energy(ef, r.traj);
}

}  // namespace

TEST(Trace, BlockEnergiesIndependentOfBeta) {
  const TorusGrid g(1, 64);
  const EnergyFunctional ef(constant_coefficients(1, {2.0, 0.0, 0.0}), identity_config(1.0, -2), g);
  ConstantRun run;
  constant_run(run, ef, SpectralField::mode(g, {4, 0}) + SpectralField::mode(g, {-4, 0}));
  const auto a = energy_rows(run.trace, 0.1, 1.0), b = energy_rows(run.trace, 0.3, 1.0);
  ASSERT_EQ(a.size(), run.traj.times.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].e, b[k].e);
    EXPECT_NEAR(a[k].E, weighted_energy(a[k].e, 0.1, 0.5, a[k].t), 1e-14 * a[k].E);
    EXPECT_LE(b[k].E, a[k].E * (1 + 1e-15));
  }
  EXPECT_EQ(a.front().verdict, Verdict::unchecked);
  EXPECT_EQ(a.back().verdict, Verdict::unchecked);
}

TEST(Trace, DifferencingToleranceFloorForQuadratic) {
  std::vector<double> E, t;
  for (int k = 0; k < 11; ++k) {
    t.push_back(0.1 * k);
    E.push_back(1.0 + t.back() * t.back());
  }
  for (std::size_t k = 1; k < 10; ++k) EXPECT_NEAR(differencing_tolerance(E, t, k), 1e-13 * E[k] / 0.1, 1e-12);
}

TEST(Trace, DifferencingToleranceForCubic) {
  std::vector<double> E, t;
  for (int k = 0; k < 11; ++k) {
    t.push_back(0.1 * k);
    E.push_back(t.back() * t.back() * t.back());
  }
  // E''' = 6 exactly; tolerance = 2 h^2 / 6 * 6 + floor
  EXPECT_NEAR(differencing_tolerance(E, t, 5), 2 * 0.01 + 1e-13 * E[5] / 0.1, 1e-10);
}

TEST(Inequality, CalibratedConstantMakesLipschitzRunPass) {
  const TorusGrid g(1, 64);
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_kind = TimeRegularity::lipschitz;
  p.time_depth = 5;
  p.space_kind = SpaceRegularity::lipschitz;
  p.space_depth = 3;
  const auto a = make_coefficients(p);
  std::mt19937_64 rng(11);
  auto amp = [](double r) { return r <= 20 ? std::pow(1.0 + r, -1.5) : 0.0; };
  const auto u0 = random_real_field(g, rng, amp), u1 = random_real_field(g, rng, amp), f0 = random_real_field(g, rng, amp);
  const auto traj = solve({a, u0, u1, [&](double t) { return f0.scaled(5.0 * std::cos(t)); }, 0.3});
  const EnergyFunctional ef(a, identity_config(1.0, -2), g);
  const auto trace = trace_energy(ef, traj);
  const double c2 = calibrate_c2(trace, 0.2);
  EXPECT_GT(c2, 0.0);
  InequalityOptions opts;
  opts.c2 = c2;
  opts.betas = {0.2};
  const auto rep = inequality_check(trace, opts);
  ASSERT_EQ(rep.per_beta.size(), 1u);
  EXPECT_TRUE(rep.found);
  EXPECT_EQ(rep.per_beta[0].fraction, 1.0);
  EXPECT_TRUE(rep.per_beta[0].gronwall_ok);
  opts.c2 = 0.0;
  opts.betas = {};
  EXPECT_THROW(inequality_check(trace, opts), ConfigurationError);
}

TEST(Inequality, PerBetaHorizonShrinks) {
  const TorusGrid g(1, 64);
  const EnergyFunctional ef(constant_coefficients(1, {2.0, 0.0, 0.0}), identity_config(1.0, -2), g);
  ConstantRun run;
  constant_run(run, ef, SpectralField::mode(g, {4, 0}) + SpectralField::mode(g, {-4, 0}));
  InequalityOptions opts;
  opts.betas = {0.1, 3.2};
  const auto rep = inequality_check(run.trace, opts);
  EXPECT_NEAR(rep.per_beta[0].horizon, 0.4, 1e-12);
  EXPECT_NEAR(rep.per_beta[1].horizon, 0.4 * std::log(2.0) / 3.2, 1e-12);
  EXPECT_LT(rep.per_beta[1].samples, rep.per_beta[0].samples);
}

TEST(Commutator, ConstantCoefficientCommutes) {
  const TorusGrid g(1, 512);
  const CutoffSystem cs;
  std::mt19937_64 rng(2);
  const auto u = random_ring_field(cs, g, 4, rng) + random_ring_field(cs, g, 5, rng) + random_ring_field(cs, g, 6, rng);
  const auto rep = commutator_probe(constant_coefficients(1, {2.0, 0.0, 0.0}), u, 5, make_cutoff(0, 1.0, g));
  EXPECT_LT(rep.ratio, 1e-13);
  EXPECT_GT(rep.gradient_norm, 0.0);
}

TEST(Commutator, FarPiecesVanishExactly) {
  const TorusGrid g(1, 1024);
  const CutoffSystem cs;
  CoefficientProfile p;
  p.amplitude = 0.25;
  p.time_kind = TimeRegularity::none;
  p.space_depth = 8;
  p.seed = 3;
  const auto a = make_coefficients(p);
  std::mt19937_64 rng(7);
  const auto u = random_ring_field(cs, g, 5, rng) + random_ring_field(cs, g, 6, rng) + random_ring_field(cs, g, 7, rng);
  const auto rep = commutator_probe(a, u, 6, cutoff_for_gamma(1.0, g));
  EXPECT_EQ(rep.far_piece_max, 0.0);
  EXPECT_EQ(rep.low_piece_max, 0.0);
  EXPECT_LT(rep.decomposition_defect, 1e-11);
  EXPECT_GT(rep.ratio, 0.0);
  EXPECT_NEAR(rep.ratio_per_log, rep.ratio / 7.0, 1e-15);
}

TEST(Commutator, DefectRatioVanishesForConstantCoefficient) {
  const TorusGrid g(1, 128);
  std::mt19937_64 rng(1);
  const auto u = random_real_field(g, rng, [](double r) { return r < 40 ? 1.0 / (1.0 + r) : 0.0; });
  EXPECT_LT(paraproduct_defect_ratio(constant_coefficients(1, {2.0, 0.0, 0.0}), make_cutoff(0, 1.0, g), u, 0.0, 0.0),
            1e-13);
}

TEST(LossMeter, ConstantCoefficientAtFloor) {
  const TorusGrid g(1, 128);
  std::mt19937_64 rng(4);
  auto amp = [](double r) { return r <= 40 ? std::pow(1.0 + r, -1.5) : 0.0; };
  const auto traj = solve({constant_coefficients(1, {2.0, 0.0, 0.0}), random_real_field(g, rng, amp),
                           random_real_field(g, rng, amp), {}, 1.0});
  const auto rep = loss_meter(traj, 0.5, {0.0, 0.05, 0.1, 0.2});
  EXPECT_TRUE(rep.found);
  EXPECT_TRUE(rep.at_floor);
  EXPECT_EQ(rep.beta_star, 0.0);
  EXPECT_THROW(loss_meter(traj, 0.5, {0.6, 0.8}), DomainError);
  EXPECT_THROW(loss_meter(traj, 1.2, {0.0}), DomainError);
}

TEST(LossMeter, ResonantLogZygmundCoefficientLosesRegularity) {
  // a(t) = 4 + A (k+1) 2^-k cos(2^k t) is bounded in the log-Zygmund norm uniformly in k; data at
  // the parametric resonance |xi| = 2^k / 4 grow like exp(c (k+1) t).
  const TorusGrid g(1, 256);
  const int k = 8, xi = (1 << k) / 4;
  const auto u0 = SpectralField::mode(g, {xi, 0}) + SpectralField::mode(g, {-xi, 0});
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(0.015 * i);
  auto run = [&](double amplitude) {
    EntrySeries e;
    e.base = 4.0;
    e.terms.push_back({amplitude, std::ldexp(1.0, k), {0, 0}, 0.0});
    const CoefficientField a(1, {e}, -1.0, 8.0);
    return loss_meter(solve({a, u0, SpectralField::zero(g), {}, 3.0}), 0.5, grid);
  };
  const auto lz = run(2.0 * (k + 1) * std::ldexp(1.0, -k));
  const auto lip = run(2.0 * std::ldexp(1.0, -2 * k));
  ASSERT_TRUE(lz.found);
  EXPECT_GT(lz.beta_star, 0.0);
  EXPECT_TRUE(lip.at_floor);
}

TEST(EnergyCsv, RoundTripIsExact) {
  std::vector<EnergyRow> rows(3);
  for (int k = 0; k < 3; ++k) {
    rows[k].t = 0.1 * k + 1e-17;
    rows[k].e = {1.0 / 3.0, std::sqrt(2.0) * k};
    rows[k].E = std::exp(-k);
    rows[k].norm_u = 0.1;
    rows[k].norm_ut = 0.2;
    rows[k].norm_Lu = 1e-300;
    rows[k].dEdt = -k * kPi;
    rows[k].verdict = k == 1 ? Verdict::pass : (k == 2 ? Verdict::fail : Verdict::unchecked);
  }
  std::stringstream ss;
  write_energy_csv(ss, rows, 1);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "t,e_0,e_1,E,norm_u,norm_ut,norm_Lu,dEdt,verdict");
  const auto back = read_energy_csv(ss);
  ASSERT_EQ(back.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(back[k].t, rows[k].t);
    EXPECT_EQ(back[k].e, rows[k].e);
    EXPECT_EQ(back[k].E, rows[k].E);
    EXPECT_EQ(back[k].norm_Lu, rows[k].norm_Lu);
    EXPECT_EQ(back[k].dEdt, rows[k].dEdt);
    EXPECT_EQ(back[k].verdict, rows[k].verdict);
  }
  EXPECT_THROW(write_energy_csv(ss, rows, 3), DimensionError);
}

TEST(EnergyCsv, SchemaErrorsNameTheLocation) {
  auto path_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_energy_csv(in);
    } catch (const SchemaError& e) {
      return e.path();
    }
    return std::string("none");
  };
  EXPECT_EQ(path_of(""), "header");
  EXPECT_EQ(path_of("t,e_1,E,norm_u,norm_ut,norm_Lu,dEdt,verdict\n"), "header");
  const std::string header = "t,e_0,E,norm_u,norm_ut,norm_Lu,dEdt,verdict\n";
  EXPECT_EQ(path_of(header + "0,1,1,1,1,1,0\n"), "line 2");
  EXPECT_EQ(path_of(header + "0,1,1,1,1,1,0,pass\n0,x,1,1,1,1,0,pass\n"), "line 3");
  EXPECT_EQ(path_of(header + "0,1,1,1,1,1,0,maybe\n"), "line 2.verdict");
  EXPECT_EQ(path_of(header + "0,1,1,1,1,1,0,pass\n"), "none");
}

TEST(EnergyCsv, FixtureParses) {
  std::ifstream in(std::string(LPWAVE_FIXTURES) + "/energy_two_rings.csv");
  ASSERT_TRUE(in);
  const auto rows = read_energy_csv(in);
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) {
    ASSERT_EQ(r.e.size(), 2u);
    EXPECT_NEAR(r.E, weighted_energy(r.e, 0.2, 0.5, r.t), 1e-12 * r.E);
  }
}
