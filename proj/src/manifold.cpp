#include "kglab/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "kglab/dynamics.hpp"
#include "kglab/errors.hpp"
#include "kglab/parallel.hpp"
#include "kglab/virial.hpp"

namespace kglab {

bool AdmissiblePerturbation::is_zero() const {
  for (double v : eps1.values)
    if (v != 0.0) return false;
  for (double v : eps2.values)
    if (v != 0.0) return false;
  return true;
}

AdmissiblePerturbation admissible_from_raw(const Field& raw1, const Field& raw2, const SpectralData& spec) {
  const Grid& g = spec.grid;
  if (raw1.parity != Parity::even || raw2.parity != Parity::even)
    throw std::invalid_argument("admissible data must be even");
  if (raw1.size() != g.size() || raw2.size() != g.size()) throw std::invalid_argument("raw data does not match grid");
  const FieldPair raw{raw1, raw2};
  const double c = 0.5 * inner(g, raw, spec.modes.z_plus);
  AdmissiblePerturbation e;
  const FieldPair p = raw - c * spec.modes.y_plus;
  e.eps1 = p.phi1;
  e.eps2 = p.phi2;
  e.eps1[g.size() - 1] = e.eps2[g.size() - 1] = 0.0;
  e.norm = energy_norm(g, e.pair());
  e.b_minus = 0.5 * inner(g, e.pair(), spec.modes.z_minus);
  return e;
}

AdmissiblePerturbation admissible_with_size(const Field& raw1, const Field& raw2, double size,
                                            const SpectralData& spec) {
  AdmissiblePerturbation e = admissible_from_raw(raw1, raw2, spec);
  if (e.norm == 0.0) return e;
  const double s = size / e.norm;
  e.eps1 = s * e.eps1;
  e.eps2 = s * e.eps2;
  e.b_minus *= s;
  e.norm = energy_norm(spec.grid, e.pair());
  return e;
}

std::vector<Bump> random_bumps(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(0.0, 6.0), width(0.5, 2.0), weight(-1.0, 1.0);
  std::vector<Bump> out;
  for (int k = 0; k < count; ++k) {
    Bump b{};
    b.center = center(rng);
    b.width = width(rng);
    b.weight = weight(rng);
    out.push_back(b);
  }
  return out;
}

Field bump_field(const Grid& g, const std::vector<Bump>& bumps) {
  Field f = sample(g, [&](double x) {
    double s = 0.0;
    for (const Bump& b : bumps) {
      const double l = (x - b.center) / b.width;
      const double r = (x + b.center) / b.width;
      s += b.weight * (std::exp(-l * l) + std::exp(-r * r));
    }
    return s;
  });
  f[g.size() - 1] = 0.0;
  return f;
}

FieldPair random_raw_pair(std::uint64_t seed, const Grid& g) {
  const auto bumps = random_bumps(seed, 6);
  return {bump_field(g, {bumps.begin(), bumps.begin() + 3}), bump_field(g, {bumps.begin() + 3, bumps.end()})};
}

AdmissiblePerturbation random_admissible(std::uint64_t seed, double size, const SpectralData& spec) {
  const FieldPair raw = random_raw_pair(seed, spec.grid);
  return admissible_with_size(raw.phi1, raw.phi2, size, spec);
}

void ShootingConfig::validate() const {
  if (!(delta0 > 0.0)) throw std::invalid_argument("delta0 must be positive");
  if (!(K >= 1.0)) throw std::invalid_argument("K must be >= 1");
  if (!(effective_bracket() > 0.0)) throw std::invalid_argument("bracket must be positive");
  if (!(effective_tol() < effective_bracket())) throw std::invalid_argument("bisection_tol must be below bracket");
  if (!(t_max > 0.0) || !(dt > 0.0)) throw std::invalid_argument("t_max and dt must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  const double r = record_interval / dt;
  if (!(r >= 1.0) || std::abs(r - std::round(r)) > 1e-9)
    throw std::invalid_argument("record_interval must be a multiple of dt");
  if (exit_check_stride < 1) throw std::invalid_argument("exit_check_stride must be >= 1");
  if (!(exit_lookahead >= 0.0)) throw std::invalid_argument("exit_lookahead must be >= 0");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::trapped_to_t_max: return "trapped_to_t_max";
    case Verdict::exited_plus: return "exited_plus";
    case Verdict::exited_minus: return "exited_minus";
    case Verdict::boundary_contaminated: return "boundary_contaminated";
  }
  return "unknown";
}

namespace {

struct Outcome {
  int sign = 0;  // +1 exited plus, -1 exited minus, 0 reached t_max
  double time = 0.0;
};

class Shooter {
 public:
  Shooter(const ShootingConfig& cfg, const SpectralData& spec)
      : cfg_(cfg),
        spec_(spec),
        bracket_(cfg.effective_bracket()),
        ceiling_(10.0 * soliton_value(0.0, spec.params.alpha)),
        record_steps_(std::lround(cfg.record_interval / cfg.dt)),
        total_steps_(std::lround(cfg.t_max / cfg.dt)),
        trial_steps_(std::lround((cfg.t_max + cfg.exit_lookahead) / cfg.dt)) {
    if (cfg.dt > 0.5 * spec.grid.h() + 1e-15) throw std::invalid_argument("shooting dt must satisfy dt <= h/2");
  }

  double bracket() const { return bracket_; }
  long record_steps() const { return record_steps_; }
  long total_steps() const { return total_steps_; }

  FieldPair start(const FieldPair& base, double c) const {
    FieldPair s = base;
    axpy(c, spec_.modes.y_plus.phi1, s.phi1);
    axpy(c, spec_.modes.y_plus.phi2, s.phi2);
    return s;
  }

  // Integrates from step k0 until |b+| >= bracket while growing, or to t_max + exit_lookahead.
  Outcome run(const FieldPair& s0, long k0) const {
    Leapfrog lf(spec_.params, spec_.grid, cfg_.dt);
    lf.set_state(s0);
    double prev = unstable_coordinate(lf.state(), spec_);
    for (long k = k0; k < trial_steps_;) {
      const long chunk = std::min<long>(cfg_.exit_check_stride, trial_steps_ - k);
      const double qmax = lf.advance(chunk);
      k += chunk;
      const double b = unstable_coordinate(lf.state(), spec_);
      const bool blown = !(qmax <= ceiling_) || !std::isfinite(b);
      if (blown || (std::abs(b) >= bracket_ && b * b > prev * prev)) {
        return {b >= 0.0 || (blown && prev >= 0.0) ? 1 : -1, static_cast<double>(k) * cfg_.dt};
      }
      prev = b;
    }
    return {0, static_cast<double>(trial_steps_) * cfg_.dt};
  }

  struct Bisection {
    double lo = 0.0, hi = 0.0;
    int iterations = 0;
    bool trapped = false;
  };

  // Bisection on the Y+ correction in [-radius, radius] around `base`.
  Bisection bisect(const FieldPair& base, long k0, double radius, int widenings, double factor,
                   int max_iters) const {
    const double tol = cfg_.effective_tol();
    for (int attempt = 0;; ++attempt) {
      Bisection b;
      b.lo = -radius;
      b.hi = radius;
      const Outcome olo = run(start(base, b.lo), k0);
      const Outcome ohi = run(start(base, b.hi), k0);
      if (olo.sign == 0 || ohi.sign == 0) {
        // Too close to t_max to separate: keep the uncorrected state when it survives too.
        const double c = run(start(base, 0.0), k0).sign == 0 ? 0.0 : (olo.sign == 0 ? b.lo : b.hi);
        b.lo = b.hi = c;
        b.trapped = true;
        return b;
      }
      if (olo.sign < 0 && ohi.sign > 0) {
        while (b.hi - b.lo > tol && b.iterations < max_iters) {
          const double mid = 0.5 * (b.lo + b.hi);
          if (mid == b.lo || mid == b.hi) break;
          ++b.iterations;
          const Outcome o = run(start(base, mid), k0);
          if (o.sign > 0) {
            b.hi = mid;
          } else if (o.sign < 0) {
            b.lo = mid;
          } else {
            b.lo = b.hi = mid;
            b.trapped = true;
            break;
          }
        }
        return b;
      }
      if (attempt >= widenings)
        throw BracketFailure("bracket endpoints +-" + std::to_string(radius) + " exit on the same side (" +
                             std::to_string(olo.sign) + ", " + std::to_string(ohi.sign) + ") at t=" +
                             std::to_string(static_cast<double>(k0) * cfg_.dt));
      radius *= factor;
    }
  }

  struct Lockstep {
    std::vector<double> times;
    std::vector<FieldPair> mid;
    std::vector<double> divergence;
    bool reached_end = false;
  };

  // Runs the straddling pair side by side and records their midpoint until they separate.
  Lockstep lockstep(const FieldPair& base, long k0, double lo, double hi, double threshold) const {
    Leapfrog a(spec_.params, spec_.grid, cfg_.dt), b(spec_.params, spec_.grid, cfg_.dt);
    a.set_state(start(base, lo));
    b.set_state(start(base, hi));
    Lockstep ls;
    auto record = [&](long k) {
      ls.times.push_back(static_cast<double>(k) * cfg_.dt);
      ls.mid.push_back(0.5 * (a.state() + b.state()));
      ls.divergence.push_back(
          std::abs(unstable_coordinate(b.state(), spec_) - unstable_coordinate(a.state(), spec_)));
    };
    record(k0);
    for (long k = k0; k < total_steps_;) {
      const long chunk = std::min<long>(record_steps_, total_steps_ - k);
      a.advance(chunk);
      b.advance(chunk);
      k += chunk;
      record(k);
      if (!(ls.divergence.back() <= threshold)) return ls;
    }
    ls.reached_end = true;
    return ls;
  }

 private:
  const ShootingConfig& cfg_;
  const SpectralData& spec_;
  double bracket_;
  double ceiling_;
  long record_steps_;
  long total_steps_;
  long trial_steps_;
};

void fill_diagnostics(ShootingResult& r, const ShootingConfig& cfg, const SpectralData& spec) {
  const Grid& g = spec.grid;
  const FieldPair ground{spec.q, Field(g.size())};
  const double delta0 = cfg.delta0;
  const double e0 = 0.5 * r.eps_norm * r.eps_norm;
  BootstrapShape& bs = r.bootstrap;
  bool contaminated = false, left_tube = false;
  const double bracket = cfg.effective_bracket();
  for (size_t i = 0; i < r.states.size(); ++i) {
    const ModalState m = decompose(r.states[i], spec, r.times[i]);
    r.b_plus.push_back(m.b_plus);
    r.b_minus.push_back(m.b_minus);
    const double dist = energy_norm(g, r.states[i] - ground);
    r.tube_distance.push_back(dist);
    r.tube_max_distance = std::max(r.tube_max_distance, dist);
    const double flux = boundary_layer_energy(r.states[i], g, cfg.boundary_layer);
    r.boundary_flux.push_back(flux);
    if (e0 > 0.0 && flux > cfg.boundary_threshold * e0) contaminated = true;
    bs.sup_u = std::max({bs.sup_u, h1_norm(g, m.u1), l2_norm(g, m.u2)});
    bs.sup_b_minus = std::max(bs.sup_b_minus, std::abs(m.b_minus));
    bs.sup_b_plus = std::max(bs.sup_b_plus, std::abs(m.b_plus));
    if (std::abs(m.b_plus) >= bracket || dist > cfg.K * cfg.K * delta0) left_tube = true;
  }
  bs.c_u = bs.sup_u / delta0;
  bs.c_b_minus = bs.sup_b_minus / delta0;
  bs.c_b_plus = bs.sup_b_plus / (delta0 * delta0);
  bs.holds = bs.c_u <= cfg.K * cfg.K && bs.c_b_minus <= cfg.K && bs.c_b_plus <= std::pow(cfg.K, 5);
  if (contaminated) {
    r.verdict = Verdict::boundary_contaminated;
  } else if (left_tube && r.verdict == Verdict::trapped_to_t_max) {
    const double b = r.b_plus.empty() ? 0.0 : r.b_plus.back();
    r.verdict = b >= 0.0 ? Verdict::exited_plus : Verdict::exited_minus;
  }
}

}  // namespace

ShootingResult shoot(const AdmissiblePerturbation& eps, const ShootingConfig& cfg, const SpectralData& spec) {
  cfg.validate();
  if (!(eps.norm <= cfg.delta0 * (1.0 + 1e-9)))
    throw std::invalid_argument("perturbation size " + std::to_string(eps.norm) + " exceeds delta0");
  const Shooter sh(cfg, spec);
  const Grid& g = spec.grid;
  const FieldPair base{spec.q + eps.eps1, eps.eps2};
  ShootingResult r;
  r.eps_norm = eps.norm;

  if (eps.is_zero()) {
    // (Q,0) is a fixed point of the pipeline: h(0) = 0 and the trajectory is constant.
    r.b_plus_0 = 0.0;
    r.segments.push_back({0.0, 0.0, sh.bracket(), 0});
    for (long k = 0; k <= sh.total_steps(); k += sh.record_steps()) {
      r.times.push_back(static_cast<double>(k) * cfg.dt);
      r.states.push_back({spec.q, Field(g.size())});
    }
    fill_diagnostics(r, cfg, spec);
    return r;
  }

  const auto first = sh.bisect(base, 0, sh.bracket(), 1, 2.0, cfg.max_iters);
  r.iterations = first.iterations;
  r.final_width = first.hi - first.lo;
  r.b_plus_0 = 0.5 * (first.lo + first.hi);
  r.segments.push_back({0.0, r.b_plus_0, sh.bracket(), first.iterations});

  if (!cfg.continuation) {
    const Outcome o = sh.run(sh.start(base, r.b_plus_0), 0);
    r.verdict = o.sign > 0 ? Verdict::exited_plus : o.sign < 0 ? Verdict::exited_minus : Verdict::trapped_to_t_max;
    if (o.sign != 0) r.exit_time = o.time;
    return r;
  }

  const double threshold = cfg.divergence_fraction * sh.bracket();
  const double tol = cfg.effective_tol();
  FieldPair seg_base = base;
  long k0 = 0;
  double lo = first.lo, hi = first.hi;
  for (;;) {
    const auto ls = sh.lockstep(seg_base, k0, lo, hi, threshold);
    size_t keep = ls.times.size();
    if (!ls.reached_end) keep -= 2;  // index of the last record within threshold
    if (ls.reached_end) {
      r.times.insert(r.times.end(), ls.times.begin(), ls.times.end());
      r.states.insert(r.states.end(), ls.mid.begin(), ls.mid.end());
      break;
    }
    if (keep == 0) throw NonConvergence("continuation made no progress at t=" + std::to_string(ls.times.front()));
    r.times.insert(r.times.end(), ls.times.begin(), ls.times.begin() + static_cast<long>(keep));
    r.states.insert(r.states.end(), ls.mid.begin(), ls.mid.begin() + static_cast<long>(keep));
    if (static_cast<int>(r.segments.size()) >= cfg.max_segments)
      throw NonConvergence("continuation exceeded max_segments");

    seg_base = ls.mid[keep];
    k0 += static_cast<long>(keep) * sh.record_steps();
    const double radius = std::max(10.0 * ls.divergence[keep], 10.0 * tol);
    const auto seg = sh.bisect(seg_base, k0, radius, 3, 100.0, 200);
    lo = seg.lo;
    hi = seg.hi;
    r.segments.push_back({ls.times[keep], 0.5 * (lo + hi), radius, seg.iterations});
  }
  fill_diagnostics(r, cfg, spec);
  return r;
}

ControlRun control_run(const AdmissiblePerturbation& eps, double b0, const ShootingConfig& cfg,
                       const SpectralData& spec) {
  cfg.validate();
  const double bracket = cfg.effective_bracket();
  ControlRun c;
  c.b_plus_0 = b0;
  Leapfrog lf(spec.params, spec.grid, cfg.dt);
  FieldPair s{spec.q + eps.eps1, eps.eps2};
  axpy(b0, spec.modes.y_plus.phi1, s.phi1);
  axpy(b0, spec.modes.y_plus.phi2, s.phi2);
  lf.set_state(s);
  const long total = std::lround(cfg.t_max / cfg.dt);
  double prev = unstable_coordinate(lf.state(), spec);
  std::vector<double> ts, ls;
  if (std::abs(prev) >= bracket) {
    ts.push_back(0.0);
    ls.push_back(std::log(std::abs(prev)));
  }
  for (long k = 0; k < total;) {
    const long chunk = std::min<long>(cfg.exit_check_stride, total - k);
    lf.advance(chunk);
    k += chunk;
    const double t = static_cast<double>(k) * cfg.dt;
    const double b = unstable_coordinate(lf.state(), spec);
    if (!std::isfinite(b)) break;
    if (!c.exit_time && std::abs(b) >= bracket && b * b > prev * prev) {
      c.exit_time = t;
      c.verdict = b > 0 ? Verdict::exited_plus : Verdict::exited_minus;
    }
    prev = b;
    if (std::abs(b) >= 10.0 * bracket) break;
    if (std::abs(b) >= bracket) {
      ts.push_back(t);
      ls.push_back(std::log(std::abs(b)));
    }
  }
  if (ts.size() >= 2) {
    double mt = 0.0, ml = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
      mt += ts[i];
      ml += ls[i];
    }
    mt /= static_cast<double>(ts.size());
    ml /= static_cast<double>(ts.size());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < ts.size(); ++i) {
      num += (ts[i] - mt) * (ls[i] - ml);
      den += (ts[i] - mt) * (ts[i] - mt);
    }
    c.growth_rate = num / den;
  }
  return c;
}

std::vector<PerturbationPair> lipschitz_pairs(std::uint64_t seed, int count, double delta, const SpectralData& spec) {
  if (count < 1) throw std::invalid_argument("lipschitz_pairs needs count >= 1");
  std::vector<PerturbationPair> out;
  for (int k = 0; k + 1 < count; ++k) {
    const auto s = seed + 2 * static_cast<std::uint64_t>(k);
    const FieldPair a = random_raw_pair(s, spec.grid), b = random_raw_pair(s + 1, spec.grid);
    out.emplace_back(admissible_with_size(a.phi1, a.phi2, delta, spec),
                     admissible_with_size(0.8 * a.phi1 + 0.2 * b.phi1, 0.8 * a.phi2 + 0.2 * b.phi2, delta, spec));
  }
  const auto base = random_admissible(seed + 2 * static_cast<std::uint64_t>(count - 1), delta, spec);
  AdmissiblePerturbation neg = base;
  neg.eps1 = -1.0 * base.eps1;
  neg.eps2 = -1.0 * base.eps2;
  neg.b_minus = -base.b_minus;
  out.emplace_back(base, neg);
  return out;
}

LipschitzReport lipschitz_probe(const std::vector<PerturbationPair>& pairs,
                                const ShootingConfig& config, const SpectralData& spec) {
  ShootingConfig cfg = config;
  cfg.continuation = false;
  const int n = static_cast<int>(pairs.size());
  // Both members of every pair are independent shooting problems.
  const auto shots = parallel_map<ShootingResult>(2 * n, [&](int i) {
    const auto& p = pairs[static_cast<size_t>(i / 2)];
    return shoot(i % 2 == 0 ? p.first : p.second, cfg, spec);
  });
  LipschitzReport rep;
  rep.delta = cfg.delta0;
  for (int k = 0; k < n; ++k) {
    const auto& p = pairs[static_cast<size_t>(k)];
    LipschitzPair lp;
    lp.h_a = shots[static_cast<size_t>(2 * k)].b_plus_0;
    lp.h_b = shots[static_cast<size_t>(2 * k + 1)].b_plus_0;
    lp.iterations_a = shots[static_cast<size_t>(2 * k)].iterations;
    lp.iterations_b = shots[static_cast<size_t>(2 * k + 1)].iterations;
    lp.distance = energy_norm(spec.grid, p.first.pair() - p.second.pair());
    if (!(lp.distance > 0.0)) throw std::invalid_argument("lipschitz pairs must be distinct");
    lp.ratio = std::abs(lp.h_a - lp.h_b) / lp.distance;
    rep.max_ratio = std::max(rep.max_ratio, lp.ratio);
    rep.pairs.push_back(lp);
  }
  rep.scaled_constant = rep.max_ratio / std::sqrt(rep.delta);
  return rep;
}

StabilityVerdict stability_verdict(const ShootingResult& r, const std::vector<double>& half_widths,
                                   const SpectralData& spec) {
  StabilityVerdict v;
  v.in_scope = r.verdict == Verdict::trapped_to_t_max;
  if (r.states.size() < 3) return v;
  const Grid& g = spec.grid;
  const FieldPair ground{spec.q, Field(g.size())};
  const double t0 = r.times.front(), T = r.times.back();
  const double w = 0.1 * (T - t0);
  v.asymptotically_stable = v.in_scope;
  for (double hw : half_widths) {
    WindowVerdict wv;
    wv.half_width = hw;
    std::vector<double> sq;
    double si = 0.0, sf = 0.0;
    int ni = 0, nf = 0;
    for (size_t i = 0; i < r.states.size(); ++i) {
      const double d = loc_pair_norm(r.states[i] - ground, g, hw);
      wv.distance.push_back(d);
      sq.push_back(d * d);
      if (r.times[i] <= t0 + w + 1e-12) {
        si += d;
        ++ni;
      }
      if (r.times[i] >= T - w - 1e-12) {
        sf += d;
        ++nf;
      }
    }
    wv.initial_average = si / ni;
    wv.final_average = sf / nf;
    wv.ratio = wv.initial_average > 0.0 ? wv.final_average / wv.initial_average : 0.0;
    std::tie(wv.integral, wv.tail_fraction) = integral_with_tail(r.times, sq, 0.5 * (t0 + T));
    wv.decays = std::isfinite(wv.integral) && wv.ratio <= 0.1 && wv.tail_fraction <= 0.2;
    v.asymptotically_stable = v.asymptotically_stable && wv.decays;
    v.windows.push_back(wv);
  }
  return v;
}

}  // namespace kglab
