#include "kglab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kglab/errors.hpp"

namespace kglab {

void IntegratorConfig::validate(const Grid& grid) const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (dt > 0.5 * grid.h() * (1.0 + 1e-12))
    throw std::invalid_argument("dt=" + std::to_string(dt) + " violates dt <= h/2 with h=" + std::to_string(grid.h()));
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  if (record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
}

double IntegratorConfig::ceiling(const ModelParams& params) const {
  return blowup_ceiling > 0.0 ? blowup_ceiling : 10.0 * soliton_value(0.0, params.alpha);
}

long IntegratorConfig::total_steps() const { return std::lround(t_max / dt); }

namespace {

template <int K>
inline double ipow_ct(double b) {
  if constexpr (K == 0) {
    return 1.0;
  } else if constexpr (K == 1) {
    return b;
  } else {
    const double h = ipow_ct<K / 2>(b);
    if constexpr (K % 2 == 0)
      return h * h;
    else
      return h * h * b;
  }
}

// |q|^{K/Scale} q with Scale in {1, 2, 4}.
template <int K, int Scale>
struct FixedPower {
  static double f(double q, double) {
    const double a = std::abs(q);
    if constexpr (Scale == 1)
      return ipow_ct<K>(a) * q;
    else if constexpr (Scale == 2)
      return ipow_ct<K / 2>(a) * ((K % 2) ? std::sqrt(a) : 1.0) * q;
    else
      return ipow_ct<K>(std::sqrt(std::sqrt(a))) * q;
  }
};

struct RuntimePower {
  static double f(double q, double p) { return std::pow(std::abs(q), p) * q; }
};

template <class Pw>
void kdk_loop(double* q, double* p, double* a, int n, double ih2, double dt, double pexp, long steps) {
  const double hdt = 0.5 * dt;
  for (long s = 0; s < steps; ++s) {
    for (int i = 0; i < n - 1; ++i) {
      p[i] += hdt * a[i];
      q[i] += dt * p[i];
    }
    a[0] = 2.0 * (q[1] - q[0]) * ih2 - q[0] + Pw::f(q[0], pexp);
    p[0] += hdt * a[0];
    for (int i = 1; i < n - 1; ++i) {
      a[i] = (q[i + 1] - 2.0 * q[i] + q[i - 1]) * ih2 - q[i] + Pw::f(q[i], pexp);
      p[i] += hdt * a[i];
    }
  }
}

using KdkFn = Leapfrog::Kernel;

template <int K>
KdkFn pick_fixed(int scale, int k) {
  if constexpr (K > 24) {
    return nullptr;
  } else {
    if (k == K) {
      if (scale == 1) return &kdk_loop<FixedPower<K, 1>>;
      if (scale == 2) return &kdk_loop<FixedPower<K, 2>>;
      return &kdk_loop<FixedPower<K, 4>>;
    }
    return pick_fixed<K + 1>(scale, k);
  }
}

KdkFn pick_kernel(double exponent) {
  for (int scale : {1, 2, 4}) {
    const double v = exponent * scale;
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-12 && r >= 1 && r <= 24)
      if (KdkFn fn = pick_fixed<1>(scale, static_cast<int>(r))) return fn;
  }
  return &kdk_loop<RuntimePower>;
}

}  // namespace

Leapfrog::Leapfrog(const ModelParams& params, const Grid& grid, double dt)
    : params_(params),
      grid_(grid),
      dt_(dt),
      pow_(2.0 * params.alpha),
      kernel_(pick_kernel(2.0 * params.alpha)),
      force_(static_cast<size_t>(grid.size()), 0.0) {}

void Leapfrog::set_state(const FieldPair& s) {
  if (s.phi1.size() != grid_.size() || s.phi2.size() != grid_.size())
    throw std::invalid_argument("state does not match grid");
  s_ = s;
  s_.phi1[grid_.size() - 1] = 0.0;
  s_.phi2[grid_.size() - 1] = 0.0;
  compute_force();
}

void Leapfrog::compute_force() {
  const int n = grid_.size();
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  const double* q = s_.phi1.data();
  double* a = force_.data();
  a[0] = 2.0 * (q[1] - q[0]) * ih2 - q[0] + pow_(q[0]) * q[0];
  for (int i = 1; i < n - 1; ++i) a[i] = (q[i + 1] - 2.0 * q[i] + q[i - 1]) * ih2 - q[i] + pow_(q[i]) * q[i];
  a[n - 1] = 0.0;
}

double Leapfrog::advance(long n) {
  const double ih2 = 1.0 / (grid_.h() * grid_.h());
  kernel_(s_.phi1.data(), s_.phi2.data(), force_.data(), grid_.size(), ih2, dt_, pow_.exponent(), n);
  double qmax = 0.0;
  for (double v : s_.phi1.values) qmax = std::isnan(v) ? v : std::max(qmax, std::abs(v));
  return qmax;
}

FieldPair step(const FieldPair& state, const IntegratorConfig& config, const ModelParams& params, const Grid& grid) {
  config.validate(grid);
  Leapfrog lf(params, grid, config.dt);
  lf.set_state(state);
  const double qmax = lf.advance(1);
  if (!(qmax <= config.ceiling(params))) throw BlowupDetected(config.dt, "blowup after one step");
  return lf.state();
}

double boundary_layer_energy(const FieldPair& s, const Grid& grid, double width) {
  const int n = grid.size();
  const int first = std::max(0, static_cast<int>(std::floor((grid.x_max() - width) / grid.h())));
  double e = 0.0;
  for (int i = first; i < n - 1; ++i) {
    const double d = (s.phi1[i + 1] - s.phi1[i]) / grid.h();
    e += d * d * grid.h();
  }
  for (int i = first; i < n; ++i) {
    const double w = (i == first || i == n - 1) ? 0.5 * grid.h() : grid.h();
    e += w * (s.phi1[i] * s.phi1[i] + s.phi2[i] * s.phi2[i]);
  }
  return e;  // two sides times the 1/2 of the energy density
}

Trajectory evolve(const FieldPair& initial, const IntegratorConfig& config, const ModelParams& params,
                  const Grid& grid) {
  config.validate(grid);
  params.validate();
  const double ceiling = config.ceiling(params);
  const long total = config.total_steps();
  Leapfrog lf(params, grid, config.dt);
  lf.set_state(initial);

  Trajectory tr;
  auto record = [&](long k) {
    tr.times.push_back(static_cast<double>(k) * config.dt);
    tr.states.push_back(lf.state());
    tr.boundary_flux.push_back(boundary_layer_energy(lf.state(), grid, config.boundary_layer));
    tr.energy.push_back(energy(lf.state(), params, grid).total);
  };
  record(0);
  for (long k = 0; k < total;) {
    const long chunk = std::min<long>(config.record_stride, total - k);
    const double qmax = lf.advance(chunk);
    k += chunk;
    if (!(qmax <= ceiling)) {
      const double t = static_cast<double>(k) * config.dt;
      if (config.throw_on_blowup) throw BlowupDetected(t, "|phi1| exceeded ceiling at t=" + std::to_string(t));
      tr.blowup_time = t;
      break;
    }
    if (chunk == config.record_stride) record(k);
  }
  return tr;
}

}  // namespace kglab
