#include "rydsim/gate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "rydsim/errors.hpp"
#include "rydsim/parallel.hpp"
#include "rydsim/units.hpp"

namespace rydsim {

GateScheme gate_scheme_from_string(const std::string& name) {
  if (name == "orir") return GateScheme::orir;
  if (name == "traditional") return GateScheme::traditional;
  throw ValidationError("unknown gate scheme '" + name + "' (expected orir|traditional)");
}

std::string to_string(GateScheme scheme) {
  return scheme == GateScheme::orir ? "orir" : "traditional";
}

double GateParams::nominal_duration() const {
  return scheme == GateScheme::orir ? units::pi / delta : units::two_pi / omega;
}

GateParams GateParams::orir(double omega, double v0_over_omega, double v_rel) {
  GateParams p;
  p.scheme = GateScheme::orir;
  p.omega = omega;
  p.delta = omega / units::pi;
  p.v0 = v0_over_omega * omega;
  p.v = p.v0 * (1.0 + v_rel);
  p.validate();
  return p;
}

GateParams GateParams::traditional(double omega, double v0_over_omega, double v_rel) {
  GateParams p;
  p.scheme = GateScheme::traditional;
  p.omega = omega;
  p.delta = 0.0;
  p.v0 = v0_over_omega * omega;
  p.v = p.v0 * (1.0 + v_rel);
  p.validate();
  return p;
}

void GateParams::validate() const {
  if (!(omega > 0.0)) throw ValidationError("GateParams: omega must be positive");
  if (scheme == GateScheme::orir) {
    if (!(delta > 0.0)) throw ValidationError("GateParams: orir scheme needs a positive delta");
    if (std::abs(omega / delta - units::pi) > 1e-9 * units::pi)
      throw ValidationError("GateParams: orir scheme requires omega/delta = pi (full pulse-area closure)");
  }
  if (v0 < 0.0) throw ValidationError("GateParams: negative design interaction");
}

namespace {

// One drive tone: <excited| H |retained> += amp * envelope(t) * exp(i*det*t).
struct Tone {
  double amp = 0.0;       // rad/us
  double detuning = 0.0;  // rad/us
  double t_on = 0.0;
  double t_off = 0.0;
  PulseEdge edge;
};

std::vector<Tone> make_tones(const GateParams& p, const PulseEdge& edge, double duration,
                             const TimingOffsets& off) {
  std::vector<Tone> tones;
  if (p.scheme == GateScheme::orir) {
    tones.push_back({+0.25 * p.omega, +p.delta, off.start_plus, duration + off.end_plus, edge});
    tones.push_back({-0.25 * p.omega, -p.delta, off.start_minus, duration + off.end_minus, edge});
  } else {
    tones.push_back({+0.5 * p.omega, 0.0, off.start_plus, duration + off.end_plus, edge});
  }
  for (const auto& t : tones)
    if (!(t.t_off > t.t_on)) throw ValidationError("gate: timing offsets collapse a tone window");
  return tones;
}

// Two-level right-hand side for one input branch: basis (retained, excited)
// with an optional interaction shift on the excited level.  Only the tones in
// `active` contribute: a stepper evaluates stages exactly on the segment
// boundaries, where the inclusive envelope of a tone switching on or off in
// the *neighbouring* segment would otherwise leak a field discontinuity into
// this one (an O(h) error the embedded estimator cannot see).
struct GateRhs {
  const std::vector<Tone>* tones = nullptr;
  const std::vector<std::size_t>* active = nullptr;
  double v = 0.0;

  void operator()(const Eigen::VectorXcd& psi, Eigen::VectorXcd& dpsi, double t) const {
    Complex e = 0.0;
    for (std::size_t i : *active) {
      const Tone& tn = (*tones)[i];
      const double env = pulse_envelope(t, tn.t_on, tn.t_off, tn.edge);
      if (env == 0.0) continue;
      e += tn.amp * env * std::exp(Complex(0.0, tn.detuning * t));
    }
    const Complex minus_i(0.0, -1.0);
    dpsi.resize(2);
    dpsi(0) = minus_i * std::conj(e) * psi(1);
    dpsi(1) = minus_i * (e * psi(0) + v * psi(1));
  }
};

// Tones whose on-window covers the interior of [a, b].
std::vector<std::size_t> active_tones(const std::vector<Tone>& tones, double a, double b) {
  const double mid = 0.5 * (a + b);
  std::vector<std::size_t> act;
  for (std::size_t i = 0; i < tones.size(); ++i)
    if (tones[i].t_on <= mid && mid <= tones[i].t_off) act.push_back(i);
  return act;
}

// Integration segments covering all tone windows, split at every envelope
// corner so the adaptive stepper never straddles a slope discontinuity.
std::vector<double> integration_cuts(const std::vector<Tone>& tones, double duration) {
  std::vector<double> cuts{0.0, duration};
  for (const auto& tn : tones) {
    const auto bp = envelope_breakpoints(tn.t_on, tn.t_off, tn.edge);
    cuts.insert(cuts.end(), bp.begin(), bp.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-14 * std::max(1.0, std::abs(b)); }),
             cuts.end());
  return cuts;
}

// 20-point Gauss-Legendre quadrature on [a, b].
template <class F>
double gauss20(const F& f, double a, double b) {
  static const std::array<double, 10> xs = {
      0.0765265211334973, 0.2277858511416451, 0.3737060887154195, 0.5108670019508271, 0.6360536807265150,
      0.7463319064601508, 0.8391169718222188, 0.9122344282513259, 0.9639719272779138, 0.9931285991850949};
  static const std::array<double, 10> ws = {
      0.1527533871307258, 0.1491729864726037, 0.1420961093183820, 0.1316886384491766, 0.1181945319615184,
      0.1019301198172404, 0.0832767415767048, 0.0626720483341091, 0.0406014298003869, 0.0176140071391521};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    sum += ws[i] * (f(mid - half * xs[i]) + f(mid + half * xs[i]));
  return sum * half;
}

}  // namespace

GateRunResult step2_evolve(const GateParams& params, GateInput input, const PulseEdge& edge,
                           double duration, const TimingOffsets& offsets, const IntegratorConfig& cfg) {
  params.validate();
  cfg.validate();
  const double T = duration > 0.0 ? duration : params.nominal_duration();
  const auto tones = make_tones(params, edge, T, offsets);
  const auto cuts = integration_cuts(tones, T);

  std::vector<std::size_t> active;
  GateRhs rhs{&tones, &active, input == GateInput::in11 ? params.v : 0.0};
  Eigen::VectorXcd x(2);
  x << 1.0, 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 1e-14) continue;
    active = active_tones(tones, cuts[k], cuts[k + 1]);
    integrate_adaptive(rhs, x, cuts[k], cuts[k + 1], cfg);
  }
  const double drift = std::abs(x.norm() - 1.0);
  if (drift > cfg.norm_tolerance)
    throw NumericalError("step2_evolve: norm drift " + std::to_string(drift) + " exceeds tolerance");

  GateRunResult out;
  out.retained = x(0);
  out.excited = x(1);
  out.leakage = std::max(0.0, 1.0 - std::norm(x(0)));
  out.end_time = cuts.back();
  return out;
}

LeakageTrajectory leakage_trajectory(const GateParams& params, const PulseEdge& edge, std::size_t samples,
                                     const IntegratorConfig& cfg) {
  params.validate();
  cfg.validate();
  if (samples < 2) throw ValidationError("leakage_trajectory: need at least two samples");
  const double T = params.nominal_duration();
  const auto tones = make_tones(params, edge, T, {});
  const auto cuts = integration_cuts(tones, T);

  std::vector<std::size_t> active;
  GateRhs rhs{&tones, &active, params.v};
  Eigen::VectorXcd x(2);
  x << 1.0, 0.0;
  LeakageTrajectory out;
  out.times.push_back(cuts.front());
  out.leakage.push_back(0.0);
  auto record = [&](double t, const Eigen::VectorXcd& y) {
    const double leak = std::max(0.0, 1.0 - std::norm(y(0)));
    if (std::abs(out.times.back() - t) < 1e-14 * std::max(1.0, std::abs(t))) {
      out.leakage.back() = leak;
    } else {
      out.times.push_back(t);
      out.leakage.push_back(leak);
    }
  };
  IntegratorConfig local = cfg;
  local.sample_interval = (cuts.back() - cuts.front()) / static_cast<double>(samples);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 1e-14) continue;
    active = active_tones(tones, cuts[k], cuts[k + 1]);
    integrate_adaptive(rhs, x, cuts[k], cuts[k + 1], local, record);
  }
  return out;
}

SweepResult blockade_sweep(const GateParams& params, double v_rel_min, double v_rel_max, std::size_t points,
                           const PulseEdge& edge, int threads, const IntegratorConfig& cfg) {
  params.validate();
  if (points < 2) throw ValidationError("blockade_sweep: need at least two grid points");
  if (!(v_rel_max > v_rel_min)) throw ValidationError("blockade_sweep: empty deviation interval");

  SweepResult out;
  out.v_rel.resize(points);
  out.leakage.resize(points);
  for (std::size_t i = 0; i < points; ++i)
    out.v_rel[i] = v_rel_min + (v_rel_max - v_rel_min) * static_cast<double>(i) / static_cast<double>(points - 1);

  parallel_for(points, threads, [&](std::size_t i) {
    GateParams p = params;
    p.v = params.v0 * (1.0 + out.v_rel[i]);
    out.leakage[i] = step2_evolve(p, GateInput::in11, edge, -1.0, {}, cfg).leakage;
  });

  double acc = 0.0;
  for (const double l : out.leakage) acc += l;  // fixed index order: thread-count independent
  out.average = acc / static_cast<double>(points);
  return out;
}

double orir_pulse_area(const GateParams& params, const PulseEdge& edge, double duration) {
  params.validate();
  if (params.scheme != GateScheme::orir) throw ValidationError("orir_pulse_area: orir scheme only");
  if (!(duration > 0.0)) throw ValidationError("orir_pulse_area: duration must be positive");
  const auto pts = envelope_breakpoints(0.0, duration, edge);
  double theta = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double a = pts[k], b = pts[k + 1];
    // cap each quadrature chunk at ~pi of drive phase so 20 nodes stay exact
    const int chunks = std::max(1, static_cast<int>(std::ceil((b - a) * params.delta / units::pi)));
    for (int c = 0; c < chunks; ++c) {
      const double ca = a + (b - a) * c / chunks;
      const double cb = a + (b - a) * (c + 1) / chunks;
      theta += gauss20(
          [&](double t) { return pulse_envelope(t, 0.0, duration, edge) * std::sin(params.delta * t); }, ca, cb);
    }
  }
  return 0.5 * params.omega * theta;
}

DurationOptimum optimize_duration(const GateParams& params, const PulseEdge& edge, double bracket_low,
                                  double bracket_high, const IntegratorConfig& cfg) {
  params.validate();
  if (params.scheme != GateScheme::orir) throw ValidationError("optimize_duration: orir scheme only");
  const double t_nom = params.nominal_duration();
  double lo = bracket_low > 0.0 ? bracket_low : t_nom - 0.010;
  double hi = bracket_high > 0.0 ? bracket_high : t_nom + 0.050;
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("optimize_duration: invalid duration bracket");

  std::size_t evals = 0;
  auto surrogate = [&](double t) {
    ++evals;
    const double s = std::sin(orir_pulse_area(params, edge, t));  // leakage = sin^2(theta)
    return s * s;
  };

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = surrogate(c), fd = surrogate(d);
  const double tol = 1e-8;  // us
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = surrogate(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = surrogate(d);
    }
  }
  const double t_star = 0.5 * (a + b);
  if (t_star - lo < 100 * tol || hi - t_star < 100 * tol)
    throw NumericalError("optimize_duration: minimum pinned to the bracket edge [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] us; widen the bracket");

  DurationOptimum out;
  out.t_star = t_star;
  const double s = std::sin(orir_pulse_area(params, edge, t_star));
  out.surrogate_leak = s * s;
  out.leakage_01 = step2_evolve(params, GateInput::in01, edge, t_star, {}, cfg).leakage;
  out.leakage_11 = step2_evolve(params, GateInput::in11, edge, t_star, {}, cfg).leakage;
  out.surrogate_gap = std::abs(out.leakage_01 - out.surrogate_leak);
  out.evaluations = evals;
  if (out.surrogate_gap > 1e-6)
    throw NumericalError("optimize_duration: pulse-area surrogate disagrees with the integrated leakage (gap " +
                         std::to_string(out.surrogate_gap) + ")");
  return out;
}

TimingErrorResult timing_error_average(const GateParams& params, const PulseEdge& edge, double duration,
                                       double sigma_t, int threads, const IntegratorConfig& cfg,
                                       TimingWindowMode mode) {
  params.validate();
  if (params.scheme != GateScheme::orir)
    throw ValidationError("timing_error_average: orir scheme only (four per-tone edges)");
  if (sigma_t < 0.0) throw ValidationError("timing_error_average: negative sigma");
  const double T = duration > 0.0 ? duration : params.nominal_duration();

  TimingErrorResult out;
  out.sigma_t = sigma_t;
  if (sigma_t == 0.0) {
    out.avg_leakage_01 = step2_evolve(params, GateInput::in01, edge, T, {}, cfg).leakage;
    out.avg_leakage_11 = step2_evolve(params, GateInput::in11, edge, T, {}, cfg).leakage;
    out.evaluations = 2;
    return out;
  }

  constexpr int kGrid = 11;  // offsets {0, +/-sigma, ..., +/-5 sigma}
  std::array<double, kGrid> offs{}, w{};
  for (int k = 0; k < kGrid; ++k) {
    const int m = k - kGrid / 2;
    offs[k] = sigma_t * m;
    w[k] = std::exp(-0.5 * m * m);
  }
  const std::size_t total = static_cast<std::size_t>(kGrid) * kGrid * kGrid * kGrid;
  std::vector<double> l01(total), l11(total), wt(total);
  parallel_for(total, threads, [&](std::size_t idx) {
    // canonical decode order: (start_plus, start_minus, end_plus, end_minus)
    const int ia = static_cast<int>(idx / (kGrid * kGrid * kGrid)) % kGrid;
    const int ib = static_cast<int>(idx / (kGrid * kGrid)) % kGrid;
    const int ic = static_cast<int>(idx / kGrid) % kGrid;
    const int id = static_cast<int>(idx) % kGrid;
    TimingOffsets off{offs[ia], offs[ib], offs[ic], offs[id]};
    if (mode == TimingWindowMode::truncate_to_slot) {
      off.start_plus = std::max(0.0, off.start_plus);
      off.start_minus = std::max(0.0, off.start_minus);
      off.end_plus = std::min(0.0, off.end_plus);
      off.end_minus = std::min(0.0, off.end_minus);
    }
    l01[idx] = step2_evolve(params, GateInput::in01, edge, T, off, cfg).leakage;
    l11[idx] = step2_evolve(params, GateInput::in11, edge, T, off, cfg).leakage;
    wt[idx] = w[ia] * w[ib] * w[ic] * w[id];
  });

  double sw = 0.0, s01 = 0.0, s11 = 0.0;
  for (std::size_t idx = 0; idx < total; ++idx) {  // canonical order: thread-count independent
    sw += wt[idx];
    s01 += wt[idx] * l01[idx];
    s11 += wt[idx] * l11[idx];
  }
  out.avg_leakage_01 = s01 / sw;
  out.avg_leakage_11 = s11 / sw;
  out.evaluations = 2 * total;
  return out;
}

}  // namespace rydsim
