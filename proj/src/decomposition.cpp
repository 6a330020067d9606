#include "kglab/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "kglab/dynamics.hpp"
#include "kglab/errors.hpp"

namespace kglab {

ModalState decompose(const FieldPair& state, const SpectralData& spec, double t) {
  const Grid& g = spec.grid;
  ModalState m;
  m.t = t;
  m.u1 = state.phi1 - spec.q;
  m.a1 = inner(g, m.u1, spec.y0);
  m.a2 = inner(g, state.phi2, spec.y0) / spec.nu0;
  axpy(-m.a1, spec.y0, m.u1);
  m.u2 = state.phi2;
  axpy(-m.a2 * spec.nu0, spec.y0, m.u2);
  m.b_plus = 0.5 * (m.a1 + m.a2);
  m.b_minus = 0.5 * (m.a1 - m.a2);
  return m;
}

FieldPair reconstruct(const ModalState& m, const SpectralData& spec) {
  FieldPair s{spec.q + m.u1, m.u2};
  axpy(m.a1, spec.y0, s.phi1);
  axpy(m.a2 * spec.nu0, spec.y0, s.phi2);
  return s;
}

double unstable_coordinate(const FieldPair& state, const SpectralData& spec) {
  const Grid& g = spec.grid;
  const int n = g.size();
  const double* p1 = state.phi1.data();
  const double* p2 = state.phi2.data();
  const double* q = spec.q.data();
  const double* y = spec.y0.data();
  const double inv = 1.0 / spec.nu0;
  double s = 0.5 * ((p1[0] - q[0] + inv * p2[0]) * y[0]);
  for (int i = 1; i < n - 1; ++i) s += (p1[i] - q[i] + inv * p2[i]) * y[i];
  // (a1 + a2)/2 with a1 + a2 = <phi1 - Q + phi2/nu0, Y0> = 2h s.
  return g.h() * s;
}

RemainderTerms remainder_terms(const ModalState& m, const SpectralData& spec) {
  const Grid& g = spec.grid;
  const ModelParams& p = spec.params;
  const AbsPower pw(2.0 * p.alpha);
  const double c1 = 2.0 * p.alpha + 1.0;
  RemainderTerms r;
  r.n_field = Field(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double q = spec.q[i];
    const double v = m.a1 * spec.y0[i] + m.u1[i];
    const double phi = q + v;
    r.n_field[i] = pw(phi) * phi - pw(q) * q - c1 * pw(q) * v;
  }
  r.n0 = inner(g, r.n_field, spec.y0);
  r.n_perp = r.n_field;
  axpy(-r.n0, spec.y0, r.n_perp);
  return r;
}

std::vector<ModalResidual> modal_ode_residual(const std::vector<ModalState>& s, const SpectralData& spec) {
  if (s.size() < 3) throw InsufficientSamples("modal residual needs at least 3 samples");
  const double nu = spec.nu0;
  std::vector<ModalResidual> out;
  for (size_t i = 1; i + 1 < s.size(); ++i) {
    const double dt = s[i + 1].t - s[i - 1].t;
    const RemainderTerms rt = remainder_terms(s[i], spec);
    ModalResidual r;
    r.t = s[i].t;
    r.a1 = (s[i + 1].a1 - s[i - 1].a1) / dt - nu * s[i].a2;
    r.a2 = (s[i + 1].a2 - s[i - 1].a2) / dt - nu * s[i].a1 - rt.n0 / nu;
    r.b_plus = (s[i + 1].b_plus - s[i - 1].b_plus) / dt - nu * s[i].b_plus - rt.n0 / (2.0 * nu);
    r.b_minus = (s[i + 1].b_minus - s[i - 1].b_minus) / dt + nu * s[i].b_minus + rt.n0 / (2.0 * nu);
    Field du2 = (1.0 / dt) * (s[i + 1].u2 - s[i - 1].u2);
    du2 = du2 + spec.L.apply(s[i].u1) - rt.n_perp;
    du2[du2.size() - 1] = 0.0;
    r.u2 = l2_norm(spec.grid, du2);
    out.push_back(r);
  }
  return out;
}

double quadratic_energy_expansion(const ModalState& m, const SpectralData& spec) {
  const Grid& g = spec.grid;
  return -4.0 * spec.nu0 * spec.nu0 * m.b_plus * m.b_minus + inner(g, m.u2, m.u2) + inner(g, spec.L.apply(m.u1), m.u1);
}

double log_linear_rate(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> ts, ls;
  for (size_t i = 0; i < t.size() && i < y.size(); ++i)
    if (y[i] != 0.0 && std::isfinite(y[i])) {
      ts.push_back(t[i]);
      ls.push_back(std::log(std::abs(y[i])));
    }
  if (ts.size() < 2) throw InsufficientSamples("rate fit needs two nonzero samples");
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
  return num / den;
}

LinearModeFit linear_mode_rates(const SpectralData& spec, double s, double t_fit, double dt, int record_stride) {
  LinearModeFit fit;
  fit.nu0 = spec.nu0;
  const long records = std::lround(t_fit / (dt * record_stride));
  auto run = [&](const FieldPair& mode, std::vector<double>& series, bool plus) {
    Leapfrog lf(spec.params, spec.grid, dt);
    FieldPair st{spec.q, Field(spec.grid.size())};
    axpy(s, mode.phi1, st.phi1);
    axpy(s, mode.phi2, st.phi2);
    lf.set_state(st);
    std::vector<double> ts;
    for (long k = 0; k <= records; ++k) {
      if (k > 0) lf.advance(record_stride);
      const ModalState m = decompose(lf.state(), spec);
      ts.push_back(static_cast<double>(k * record_stride) * dt);
      series.push_back(plus ? m.b_plus : m.b_minus);
    }
    if (fit.t.empty()) fit.t = ts;
    return log_linear_rate(ts, series);
  };
  fit.growth_rate = run(spec.modes.y_plus, fit.b_plus, true);
  fit.decay_rate = run(spec.modes.y_minus, fit.b_minus, false);
  return fit;
}

EquilibriumDrift equilibrium_energy_drift(const SpectralData& spec, double t_max, double dt, int record_stride,
                                          double departure_level) {
  EquilibriumDrift d;
  const ModelParams& p = spec.params;
  const FieldPair ground{spec.q, Field(spec.grid.size())};
  const long records = std::lround(t_max / (dt * record_stride));
  Leapfrog lf(p, spec.grid, dt);
  lf.set_state(ground);
  const double e0 = energy(lf.state(), p, spec.grid).total;
  for (long k = 0; k <= records; ++k) {
    if (k > 0) {
      lf.advance(record_stride);
      const double b = unstable_coordinate(lf.state(), spec);
      FieldPair s = lf.state();
      axpy(-b, spec.modes.y_plus.phi1, s.phi1);
      axpy(-b, spec.modes.y_plus.phi2, s.phi2);
      lf.set_state(s);
      d.max_correction = std::max(d.max_correction, std::abs(b));
    }
    const double rel = std::abs(energy(lf.state(), p, spec.grid).total - e0) / std::abs(e0);
    d.t.push_back(static_cast<double>(k * record_stride) * dt);
    d.relative_drift.push_back(rel);
    d.max_relative_drift = std::max(d.max_relative_drift, rel);
  }
  Leapfrog raw(p, spec.grid, dt);
  raw.set_state(ground);
  for (long k = 1; k <= records; ++k) {
    raw.advance(record_stride);
    const double b = unstable_coordinate(raw.state(), spec);
    if (!(std::abs(b) < departure_level)) {
      d.raw_departure_time = static_cast<double>(k * record_stride) * dt;
      break;
    }
  }
  return d;
}

}  // namespace kglab
