#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "rydsim/addressing.hpp"
#include "rydsim/errors.hpp"
#include "rydsim/units.hpp"

using namespace rydsim;
using Cx = std::complex<double>;

namespace {

IntegratorConfig fast_cfg() {
  IntegratorConfig cfg;
  cfg.rtol = 1e-10;
  cfg.atol = 1e-12;
  cfg.norm_tolerance = 1e-7;
  return cfg;
}

// Closed-form summary of a nontarget atom that sees a single tone of
// strength omega_eff detuned by delta: a generalized Rabi problem with
// W = sqrt(omega_eff^2 + delta^2) and excited population
// (omega_eff^2/W^2) sin^2(W t / 2) during each pulse.  The echo makes the
// second pulse retrace the first, so the dwell time doubles the first-pulse
// integral and adds the wait plateau.
struct SingleToneEcho {
  double w = 0.0;
  double ceiling = 0.0;
  double plateau = 0.0;
  double t_de = 0.0;
};

SingleToneEcho single_tone_echo(double omega_eff, double delta, double t0, double t_mu) {
  SingleToneEcho out;
  out.w = std::hypot(omega_eff, delta);
  out.ceiling = omega_eff * omega_eff / (out.w * out.w);
  out.plateau = out.ceiling * std::pow(std::sin(0.5 * out.w * t0), 2);
  const double pulse_integral = out.ceiling * (0.5 * t0 - std::sin(out.w * t0) / (2.0 * out.w));
  out.t_de = 2.0 * pulse_integral + t_mu * out.plateau;
  return out;
}

double rydberg_population_near(const EchoResult& res, double t_query, const std::string& level) {
  std::size_t best = 0;
  double gap = 1e300;
  for (std::size_t k = 0; k < res.trajectory.times.size(); ++k) {
    const double g = std::abs(res.trajectory.times[k] - t_query);
    if (g < gap) {
      gap = g;
      best = k;
    }
  }
  return res.trajectory.at(best).population(level);
}

}  // namespace

TEST_SUITE("addressing") {

TEST_CASE("parameter factories fix the protocol couplings") {
  const double delta = units::mhz(4.0);
  const auto m1 = AddressingParams::method1(delta);
  CHECK(m1.omega == doctest::Approx(units::pi * delta / 4.0).epsilon(1e-14));
  CHECK(m1.t_mu == doctest::Approx(units::two_pi / delta).epsilon(1e-14));
  CHECK(m1.t0() == doctest::Approx(units::pi / delta).epsilon(1e-14));

  const auto m1b = AddressingParams::method1(delta, 0.4);
  CHECK(m1b.t_mu == doctest::Approx(0.4));

  const auto m2 = AddressingParams::method2(delta);
  CHECK(m2.omega == doctest::Approx(std::sqrt(1.5) * delta).epsilon(1e-14));
  CHECK(m2.t_mu == doctest::Approx(0.0));

  AddressingParams bad = m1;
  bad.t_mu = -0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = m1;
  bad.omega = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("atom role names round-trip in both spellings") {
  CHECK(atom_role_from_string("target") == AtomRole::target);
  CHECK(atom_role_from_string("nontarget-perp") == AtomRole::nontarget_perp);
  CHECK(atom_role_from_string("nontarget_perp") == AtomRole::nontarget_perp);
  CHECK(atom_role_from_string("nontarget-parallel") == AtomRole::nontarget_parallel);
  CHECK(to_string(AtomRole::nontarget_perp) == "nontarget-perp");
  CHECK_THROWS_AS(atom_role_from_string("bystander"), ValidationError);
}

TEST_CASE("selectors expose one beam to nontarget atoms") {
  const auto target = selector_for(AtomRole::target, 0.5);  // scale ignored for the target
  CHECK(target.included(DrivePath::lower_perp));
  CHECK(target.included(DrivePath::lower_parallel));
  CHECK(target.scale_for(DrivePath::lower_perp) == doctest::Approx(1.0));
  CHECK(target.scale_for(DrivePath::lower_parallel) == doctest::Approx(1.0));

  const auto perp = selector_for(AtomRole::nontarget_perp, 0.73);
  CHECK(perp.included(DrivePath::lower_perp));
  CHECK_FALSE(perp.included(DrivePath::lower_parallel));
  CHECK(perp.scale_for(DrivePath::lower_perp) == doctest::Approx(0.73));

  const auto par = selector_for(AtomRole::nontarget_parallel, 0.5);
  CHECK_FALSE(par.included(DrivePath::lower_perp));
  CHECK(par.included(DrivePath::lower_parallel));
  CHECK_THROWS_AS(selector_for(AtomRole::nontarget_perp, 1.2), ValidationError);
  CHECK_THROWS_AS(selector_for(AtomRole::nontarget_perp, -0.1), ValidationError);
}

TEST_CASE("first protocol: program structure") {
  const auto params = AddressingParams::method1(units::mhz(4.0));
  const auto seq = method1_sequence(params);
  REQUIRE(seq.stages.size() == 3);
  CHECK(seq.stages[0].duration() == doctest::Approx(params.t0()));
  CHECK(seq.stages[1].duration() == doctest::Approx(params.t_mu));
  CHECK(seq.stages[1].couplings.empty());
  CHECK(seq.stages[2].duration() == doctest::Approx(params.t0()));
  CHECK(seq.intended_level == "1");
  REQUIRE(seq.decay_levels.size() == 1);
  CHECK(seq.decay_levels[0] == "r");
  CHECK(seq.total_duration() == doctest::Approx(2.0 * params.t0() + params.t_mu));
}

TEST_CASE("first protocol: target transfers fully and returns to +|1>") {
  const auto params = AddressingParams::method1(units::mhz(4.0));
  const auto seq = method1_sequence(params);
  const auto res = simulate_role(seq, AtomRole::target, 1.0, fast_cfg());
  // Both beams interfere to i*Omega*sin(delta t); the pulse area closes at t0.
  CHECK(res.report.peak_rydberg == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.report.restoration > 1.0 - 1e-8);
  // The sign-reversed second pulse brings the atom back with no phase scar.
  CHECK(std::abs(res.report.final_amplitude - Cx(1.0, 0.0)) < 1e-8);
  // Dwell time: the pulse integrals average to t0/2 each, plus the full wait.
  const double expect_t_de = params.t0() + params.t_mu;
  CHECK(res.report.t_de == doctest::Approx(expect_t_de).epsilon(2e-5));
  CHECK(res.report.decay_error == doctest::Approx(expect_t_de / params.tau).epsilon(2e-5));
}

TEST_CASE("first protocol: nontarget dynamics follow the single-tone closed form") {
  const auto params = AddressingParams::method1(units::mhz(4.0));
  const auto seq = method1_sequence(params);
  for (double scale : {0.73, 0.3}) {
    CAPTURE(scale);
    const auto res = simulate_role(seq, AtomRole::nontarget_perp, scale, fast_cfg());
    const auto oracle = single_tone_echo(scale * params.omega, params.delta, params.t0(), params.t_mu);
    CHECK(res.report.restoration > 1.0 - 1e-8);
    CHECK(res.report.t_de == doctest::Approx(oracle.t_de).epsilon(1e-4));
    CHECK(res.report.peak_rydberg == doctest::Approx(oracle.ceiling).epsilon(1e-4));
    const double mid_wait = params.t0() + 0.5 * params.t_mu;
    CHECK(rydberg_population_near(res, mid_wait, "r") == doctest::Approx(oracle.plateau).epsilon(1e-5));
  }
}

TEST_CASE("first protocol: echo quality is independent of the wait duration") {
  const double delta = units::mhz(4.0);
  const auto a = simulate_role(method1_sequence(AddressingParams::method1(delta)),
                               AtomRole::nontarget_perp, 0.73, fast_cfg());
  const auto b = simulate_role(method1_sequence(AddressingParams::method1(delta, 0.7 * units::two_pi / delta)),
                               AtomRole::nontarget_perp, 0.73, fast_cfg());
  CHECK(std::abs(a.report.restoration - b.report.restoration) < 1e-9);
  CHECK(a.report.restoration > 1.0 - 1e-8);
}

TEST_CASE("first protocol: high-precision restoration at default tolerances") {
  const auto seq = method1_sequence(AddressingParams::method1(units::mhz(4.0)));
  IntegratorConfig cfg;  // default tight tolerances
  cfg.sample_interval = seq.total_duration() / 50.0;  // keep the dwell sampling cheap
  const auto res = simulate_role(seq, AtomRole::nontarget_perp, 1.0, cfg);
  CHECK(res.report.restoration > 1.0 - 1e-12);
}

TEST_CASE("second protocol: target lands exactly on i|R>") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto seq = method2_sequence(params);
  const auto res = simulate_role(seq, AtomRole::target, 1.0, fast_cfg());
  const Cx amp_R = res.report.final_amplitudes.at("R");
  CHECK(std::abs(amp_R) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::arg(amp_R) == doctest::Approx(0.5 * units::pi).epsilon(1e-9));
  const double residual = res.trajectory.final_state().population("1") +
                          res.trajectory.final_state().population("r");
  CHECK(residual < 1e-9);
}

TEST_CASE("second protocol: double application returns the target to -|1>") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto seq = method2_sequence(params);
  const auto cfg = fast_cfg();
  const auto first = simulate_role(seq, AtomRole::target, 1.0, cfg);
  const auto second = simulate_sequence(seq, first.trajectory.final_state(), selector_for(AtomRole::target), cfg);
  const Cx amp1 = second.final_state().amplitude("1");
  CHECK(std::abs(amp1 - Cx(-1.0, 0.0)) < 1e-8);
}

TEST_CASE("second protocol: nontarget atoms on either beam are restored") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto seq = method2_sequence(params);

  const auto perp = simulate_role(seq, AtomRole::nontarget_perp, 0.73, fast_cfg());
  CHECK(perp.report.restoration > 1.0 - 1e-8);
  const auto oracle = single_tone_echo(0.73 * params.omega, params.delta, params.t0(), params.t_mu);
  CHECK(perp.report.t_de == doctest::Approx(oracle.t_de).epsilon(1e-4));

  // An atom on the upper-leg beam only couples |r> <-> |R>, which an atom in
  // |1> never populates: it idles through the whole program.
  const auto par = simulate_role(seq, AtomRole::nontarget_parallel, 0.73, fast_cfg());
  CHECK(par.report.restoration == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(par.report.t_de < 1e-12);
}

TEST_CASE("second protocol: wait insertion is compensated") {
  const double delta = units::mhz(4.0);
  const auto a = simulate_role(method2_sequence(AddressingParams::method2(delta, 0.0)),
                               AtomRole::nontarget_perp, 0.73, fast_cfg());
  const auto b = simulate_role(method2_sequence(AddressingParams::method2(delta, 0.31)),
                               AtomRole::nontarget_perp, 0.73, fast_cfg());
  CHECK(std::abs(a.report.restoration - b.report.restoration) < 1e-9);
}

TEST_CASE("microwave echo schedule: phase matching and special cases") {
  const double delta = units::mhz(4.0);
  const double t0 = units::pi / delta;

  // Finite-duration pi pulse at 50 MHz: t_mu = pi/omega_mu = 10 ns.
  const double kappa = -52.6 / 56.2;
  const auto sched = microwave_echo_schedule(kappa, delta, units::mhz(50.0));
  CHECK(sched.t_mu == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(sched.t1 == doctest::Approx(t0 / std::abs(kappa)).epsilon(1e-12));
  CHECK(sched.winding == 2);
  CHECK(sched.t_wait == doctest::Approx(0.265641).epsilon(1e-4));
  // |kappa| delta (t_w + t_mu + t0) + t0 delta = 2 pi n exactly.
  const double phase = std::abs(kappa) * delta * (sched.t_wait + sched.t_mu + t0) + t0 * delta;
  CHECK(phase == doctest::Approx(units::two_pi * sched.winding).epsilon(1e-12));

  // kappa = -1 with the same pulse: the budget forces the next winding.
  const auto unit = microwave_echo_schedule(-1.0, delta, units::mhz(50.0));
  CHECK(unit.t_mu == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(unit.t_wait == doctest::Approx(0.24).epsilon(1e-10));
  CHECK(unit.winding == 2);

  // omega_mu = 0 folds the whole wait budget into the pi pulse.
  const auto folded = microwave_echo_schedule(kappa, delta, 0.0);
  CHECK(folded.t_mu == doctest::Approx((1.0 / std::abs(kappa) - 1.0) * t0).epsilon(1e-10));
  CHECK(folded.omega_mu == doctest::Approx(units::pi / folded.t_mu).epsilon(1e-10));
  CHECK(folded.t_wait == doctest::Approx(0.0));
  CHECK(folded.winding == 1);

  // kappa = -1 with omega_mu = 0: zero budget, ideal instantaneous pulse.
  const auto ideal = microwave_echo_schedule(-1.0, delta, 0.0);
  CHECK(ideal.t_mu == doctest::Approx(0.0));
  CHECK(ideal.t_wait == doctest::Approx(0.0));
  CHECK(ideal.winding == 1);

  // The interaction echo requires opposite-sign pair coefficients.
  CHECK_THROWS_AS(microwave_echo_schedule(0.9, delta, 0.0), ValidationError);
  CHECK_THROWS_AS(microwave_echo_schedule(0.0, delta, 0.0), ValidationError);
}

TEST_CASE("microwave echo: nontarget restored, target reaches i|R>") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto echo = microwave_echo_schedule(-52.6 / 56.2, params.delta, 0.0);

  const auto non = simulate_microwave_echo_method2(params, echo, AtomRole::nontarget_perp, 0.73, fast_cfg());
  CHECK(non.report.restoration > 1.0 - 1e-6);

  const auto tgt = simulate_microwave_echo_method2(params, echo, AtomRole::target, 1.0, fast_cfg());
  const Cx amp_R = tgt.report.final_amplitudes.at("R");
  CHECK(std::abs(amp_R) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::arg(amp_R) == doctest::Approx(0.5 * units::pi).epsilon(1e-6));
}

TEST_CASE("microwave echo: static phase-compensation errors degrade the echo") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  auto echo = microwave_echo_schedule(-52.6 / 56.2, params.delta, 0.0);
  const auto clean = simulate_microwave_echo_method2(params, echo, AtomRole::nontarget_perp, 0.73, fast_cfg());
  echo.phase_error_perp = 0.05;
  const auto dirty = simulate_microwave_echo_method2(params, echo, AtomRole::nontarget_perp, 0.73, fast_cfg());
  CHECK(dirty.report.restoration < clean.report.restoration);
  CHECK(clean.report.restoration - dirty.report.restoration > 1e-7);
}

TEST_CASE("many-body echo: single atom reduces to the one-atom simulation") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto echo = microwave_echo_schedule(-1.0, params.delta, 0.0);
  const auto single = simulate_microwave_echo_method2(params, echo, AtomRole::nontarget_perp, 0.73, fast_cfg());
  const auto joint =
      simulate_many_body_echo(1, Eigen::MatrixXd::Zero(1, 1), -1.0, {0.73}, params, echo, fast_cfg());
  CHECK(joint.fidelity == doctest::Approx(single.report.restoration).epsilon(1e-9));
}

TEST_CASE("many-body echo: noninteracting pair factorizes") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto echo = microwave_echo_schedule(-1.0, params.delta, 0.0);
  const auto a = simulate_many_body_echo(1, Eigen::MatrixXd::Zero(1, 1), -1.0, {0.73}, params, echo, fast_cfg());
  const auto b = simulate_many_body_echo(1, Eigen::MatrixXd::Zero(1, 1), -1.0, {0.45}, params, echo, fast_cfg());
  const auto pair =
      simulate_many_body_echo(2, Eigen::MatrixXd::Zero(2, 2), -1.0, {0.73, 0.45}, params, echo, fast_cfg());
  CHECK(pair.fidelity == doctest::Approx(a.fidelity * b.fidelity).epsilon(1e-8));
}

TEST_CASE("many-body echo: interacting pair still restored with kappa = -1") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto echo = microwave_echo_schedule(-1.0, params.delta, 0.0);
  Eigen::MatrixXd v(2, 2);
  v.setZero();
  v(0, 1) = v(1, 0) = units::mhz(0.1);
  const auto res = simulate_many_body_echo(2, v, -1.0, {0.73, 0.73}, params, echo, fast_cfg());
  CHECK(res.fidelity > 1.0 - 1e-4);
  CHECK(res.initial.basis.dim() == 9);
  CHECK(res.final_state.norm() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("many-body echo: input validation") {
  const auto params = AddressingParams::method2(units::mhz(4.0));
  const auto echo = microwave_echo_schedule(-1.0, params.delta, 0.0);
  CHECK_THROWS_AS(
      simulate_many_body_echo(2, Eigen::MatrixXd::Zero(2, 2), -1.0, {0.5}, params, echo, fast_cfg()),
      ValidationError);
  CHECK_THROWS_AS(
      simulate_many_body_echo(5, Eigen::MatrixXd::Zero(5, 5), -1.0, {0.5, 0.5, 0.5, 0.5, 0.5}, params,
                              echo, fast_cfg()),
      ValidationError);
  CHECK_THROWS_AS(
      simulate_many_body_echo(2, Eigen::MatrixXd::Zero(1, 1), -1.0, {0.5, 0.5}, params, echo, fast_cfg()),
      ValidationError);
}

}  // TEST_SUITE
