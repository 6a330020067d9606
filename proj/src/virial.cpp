#include "kglab/virial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kglab/errors.hpp"

namespace kglab {

namespace {
double sech(double x) { return 1.0 / std::cosh(x); }

double weighted_integral(const Grid& g, const Field& a, const Field& b, double (*w)(double)) {
  std::vector<double> f(static_cast<size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) f[static_cast<size_t>(i)] = a[i] * b[i] * w(g.x(i));
  return integrate(g, f);
}

double sech_half(double x) { return sech(0.5 * x); }
}  // namespace

VirialRecord evaluate_functionals(const ModalState& m, const TransformedState& tr, const WeightFamily& w,
                                  const SpectralData& spec, double delta) {
  const Grid& g = spec.grid;
  const int n = g.size();
  VirialRecord r;
  r.t = m.t;
  r.a1 = m.a1;
  r.a2 = m.a2;
  r.a1_abs = std::abs(m.a1);

  const Field u1p = d1(g, m.u1);
  const Field v1p = d1(g, tr.v1);
  std::vector<double> fi(static_cast<size_t>(n)), fj(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double za = w.zeta_A[i];
    fi[static_cast<size_t>(i)] = (w.phi_A[i] * u1p[i] + 0.5 * za * za * m.u1[i]) * m.u2[i];
    fj[static_cast<size_t>(i)] = (w.psi_B[i] * v1p[i] + 0.5 * w.psi_B_d1[i] * tr.v1[i]) * tr.v2[i];
  }
  r.I_val = integrate(g, fi);
  r.J_val = integrate(g, fj);
  r.H_val = r.J_val + 8.0 * std::pow(delta, 0.1) * r.I_val;
  r.B_val = m.b_plus * m.b_plus - m.b_minus * m.b_minus;
  r.K_val = weighted_integral(g, m.u1, m.u2, &sech);
  const double u1_grad_sech = grad_sq(g, m.u1, [](double x) { return sech(x); });
  r.u1_sech = u1_grad_sech + weighted_integral(g, m.u1, m.u1, &sech);
  r.G_val = 0.5 * (r.u1_sech + weighted_integral(g, m.u2, m.u2, &sech));

  r.w_loc = local_norm(tr.w, g);
  r.z_loc = local_norm(tr.z, g);
  r.w_grad_sq = grad_sq(g, tr.w);
  r.w_sech_half = weighted_integral(g, tr.w, tr.w, &sech_half);
  r.u1_h1 = h1_norm(g, m.u1);
  r.u2_l2 = l2_norm(g, m.u2);
  r.v1_h1 = h1_norm(g, tr.v1);
  r.v2_l2 = l2_norm(g, tr.v2);
  return r;
}

void differentiate_series(std::vector<VirialRecord>& rs) {
  if (rs.size() < 3) throw InsufficientSamples("differentiate_series needs at least 3 records");
  for (auto& r : rs) r.has_derivatives = false;
  for (size_t i = 1; i + 1 < rs.size(); ++i) {
    const double dt = rs[i + 1].t - rs[i - 1].t;
    auto d = [&](double VirialRecord::*f) { return (rs[i + 1].*f - rs[i - 1].*f) / dt; };
    VirialRecord& r = rs[i];
    r.dI = d(&VirialRecord::I_val);
    r.dJ = d(&VirialRecord::J_val);
    r.dH = d(&VirialRecord::H_val);
    r.dB = d(&VirialRecord::B_val);
    r.dK = d(&VirialRecord::K_val);
    r.dG = d(&VirialRecord::G_val);
    r.has_derivatives = true;
  }
}

double check_virial_identity(const Field& u1, const WeightFamily& w, const Grid& g) {
  const int n = g.size();
  const Field u1p = d1(g, u1);
  const Field u1pp = d2(g, u1);
  std::vector<double> lhs(static_cast<size_t>(n)), pot(static_cast<size_t>(n));
  Field wf(n);
  for (int i = 0; i < n; ++i) {
    const double za = w.zeta_A[i];
    lhs[static_cast<size_t>(i)] = (w.phi_A[i] * u1p[i] + 0.5 * za * za * u1[i]) * (u1pp[i] - u1[i]);
    wf[i] = za * u1[i];
    pot[static_cast<size_t>(i)] = w.log_bracket_A[i] * wf[i] * wf[i];
  }
  const double L = integrate(g, lhs);
  const double R = -grad_sq(g, wf) - 0.5 * integrate(g, pot);
  return std::abs(L - R);
}

NonlinearBound nonlinear_weighted_bound(const Field& u1, double A, const ModelParams& p, const Grid& g) {
  const double a = p.alpha;
  const AbsPower pw(2.0 * a + 2.0);
  std::vector<double> f(static_cast<size_t>(g.size()));
  Field w(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double z = zeta(g.x(i), A);
    f[static_cast<size_t>(i)] = z * z * pw(u1[i]);
    w[i] = z * u1[i];
  }
  NonlinearBound nb;
  nb.lhs = integrate(g, f);
  const double c = (a + 1.0) / a;
  nb.rhs = 4.0 / 3.0 * c * c * A * A * std::pow(sup_norm(u1), 2.0 * a) * grad_sq(g, w);
  return nb;
}

double RepulsivePotential::min_gap() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < V.size(); ++i) m = std::min(m, V[i] - V0[i]);
  return m;
}

double RepulsivePotential::min_v0() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : V0.values) m = std::min(m, v);
  return m;
}

RepulsivePotential repulsive_potential(double B, const ModelParams& p, const Grid& g) {
  const double a = p.alpha;
  const double c = a * (a - 1.0) / (a + 1.0);
  RepulsivePotential rp;
  rp.B = B;
  rp.V = Field(g.size());
  rp.V0 = Field(g.size());
  double phi = 0.0;
  double zprev = 1.0;
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    const double z = zeta(x, B);
    if (i > 0) phi += 0.5 * g.h() * (zprev * zprev + z * z);
    zprev = z;
    const double q = soliton_value(x, a);
    const double qp = -std::tanh(a * x) * q;
    const double q2a1 = std::pow(q, 2.0 * a - 1.0);
    rp.V[i] = 0.5 * log_zeta_d2(x, B) - c * (phi / (z * z)) * q2a1 * qp;
    rp.V0[i] = 0.5 * c * std::abs(x * qp) * q2a1;
  }
  return rp;
}

RepulsivePotential repulsive_potential(const WeightFamily& w, const ModelParams& p, const Grid& g) {
  return repulsive_potential(w.B, p, g);
}

PositivityScan positivity_threshold(const ModelParams& p, const Grid& g, const std::vector<double>& Bs) {
  PositivityScan s;
  s.degenerate = std::abs(p.alpha - 1.0) < 1e-14;
  std::vector<bool> ok;
  for (double B : Bs) {
    const RepulsivePotential rp = repulsive_potential(B, p, g);
    double vmax = 0.0;
    for (double v : rp.V0.values) vmax = std::max(vmax, std::abs(v));
    s.B.push_back(B);
    s.min_gap.push_back(rp.min_gap());
    s.min_v0.push_back(rp.min_v0());
    const double tol = 1e-12 * std::max(vmax, 1e-300);
    ok.push_back(!s.degenerate && rp.min_gap() >= -tol && rp.min_v0() >= -tol);
  }
  for (size_t k = ok.size(); k-- > 0;) {
    if (!ok[k]) break;
    s.B0 = Bs[k];
  }
  return s;
}

bool InequalityReport::hard_ok() const {
  for (const auto& e : entries)
    if (e.hard && !e.passed) return false;
  return true;
}

const InequalityEntry* InequalityReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

namespace {
using Getter = double VirialRecord::*;

// 10x the median Richardson estimate |D_2h - D_h|/3 of the centered derivative.
double noise_floor(const std::vector<VirialRecord>& rs, Getter f) {
  std::vector<double> e;
  for (size_t i = 2; i + 2 < rs.size(); ++i) {
    const double dt = rs[i + 1].t - rs[i].t;
    const double d1 = (rs[i + 1].*f - rs[i - 1].*f) / (2.0 * dt);
    const double d2 = (rs[i + 2].*f - rs[i - 2].*f) / (4.0 * dt);
    e.push_back(std::abs(d2 - d1) / 3.0);
  }
  if (e.empty()) return 0.0;
  std::nth_element(e.begin(), e.begin() + static_cast<long>(e.size() / 2), e.end());
  return 10.0 * e[e.size() / 2];
}

double safe_ratio(double num, double den) {
  if (den > 0.0) return num / den;
  if (num == 0.0) return 0.0;
  return num > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}
}  // namespace

InequalityReport check_inequalities(const std::vector<VirialRecord>& rs, double nu0, double delta,
                                    const RepulsivePotential* potential) {
  InequalityReport rep;
  const double A = 1.0 / delta;
  const double B = std::pow(delta, -0.25);
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<const VirialRecord*> inner;
  for (const auto& r : rs)
    if (r.has_derivatives) inner.push_back(&r);
  const int total = static_cast<int>(inner.size());

  const double nf_H = noise_floor(rs, &VirialRecord::H_val);
  const double nf_B = noise_floor(rs, &VirialRecord::B_val);
  const double nf_I = noise_floor(rs, &VirialRecord::I_val);
  const double nf_J = noise_floor(rs, &VirialRecord::J_val);

  {
    InequalityEntry e{"virial_H", "dH/dt <= -C3 |w|_loc^2 + 2|a1|^3", inf, 0.0, 0, nf_H, 0, total, false, true};
    std::vector<double> c;
    for (const auto* r : inner) {
      const double q = 2.0 * std::pow(r->a1_abs, 3) - r->dH;
      if (std::abs(q) < nf_H) continue;
      e.worst_margin = std::min(e.worst_margin, q);
      if (q < 0.0) ++e.violation_count;
      c.push_back(safe_ratio(q, r->w_loc * r->w_loc));
    }
    e.samples_considered = static_cast<int>(c.size());
    if (!c.empty()) {
      std::sort(c.begin(), c.end());
      e.fitted_constant = c[static_cast<size_t>(0.01 * static_cast<double>(c.size()))];
      e.passed = e.fitted_constant > 0.0;
    }
    rep.entries.push_back(e);
  }
  {
    InequalityEntry e{"modal_B", "dB/dt >= nu0/2 (a1^2 + a2^2) - C4 |w|_loc^2", inf, 0.0, 0, nf_B, 0, total, false,
                      true};
    for (const auto* r : inner) {
      const double q = r->dB - 0.5 * nu0 * (r->a1 * r->a1 + r->a2 * r->a2);
      if (std::abs(q) < nf_B) continue;
      ++e.samples_considered;
      e.worst_margin = std::min(e.worst_margin, q);
      if (q < 0.0) {
        ++e.violation_count;
        e.fitted_constant = std::max(e.fitted_constant, safe_ratio(-q, r->w_loc * r->w_loc));
      }
    }
    e.passed = std::isfinite(e.fitted_constant);
    rep.entries.push_back(e);
  }
  {
    InequalityEntry e{"virial_I", "dI/dt <= -1/2 int (w')^2 + C1 int sech(x/2) w^2 + C1 a1^4", inf, 0.0, 0, nf_I, 0,
                      total, false, true};
    for (const auto* r : inner) {
      const double q = r->dI + 0.5 * r->w_grad_sq;
      if (std::abs(q) < nf_I) continue;
      ++e.samples_considered;
      e.worst_margin = std::min(e.worst_margin, -q);
      e.fitted_constant = std::max(e.fitted_constant, safe_ratio(q, r->w_sech_half + std::pow(r->a1, 4)));
    }
    e.passed = std::isfinite(e.fitted_constant);
    rep.entries.push_back(e);
  }
  {
    InequalityEntry e{"virial_J", "dJ/dt <= -C2 |z|_loc^2 + delta^{1/8} |w|_loc^2 + |a1|^3", inf, inf, 0, nf_J, 0,
                      total, false, true};
    const double d8 = std::pow(delta, 0.125);
    for (const auto* r : inner) {
      const double q = d8 * r->w_loc * r->w_loc + std::pow(r->a1_abs, 3) - r->dJ;
      if (std::abs(q) < nf_J) continue;
      ++e.samples_considered;
      e.worst_margin = std::min(e.worst_margin, q);
      if (q < 0.0) ++e.violation_count;
      e.fitted_constant = std::min(e.fitted_constant, safe_ratio(q, r->z_loc * r->z_loc));
    }
    if (e.samples_considered == 0) e.fitted_constant = 0.0;
    e.passed = e.samples_considered == 0 || e.fitted_constant > 0.0;
    rep.entries.push_back(e);
  }
  {
    InequalityEntry a{"coercivity_A", "int w^2 sech(x/2) <= C (|z|_loc^2 + e^{-B} |w'|^2)", inf, 0.0, 0, 0.0, 0,
                      static_cast<int>(rs.size()), false, true};
    InequalityEntry b{"coercivity_B", "|w|_loc^2 <= C (|z|_loc^2 + |w'|^2)", inf, 0.0, 0, 0.0, 0,
                      static_cast<int>(rs.size()), false, true};
    for (const auto& r : rs) {
      const double z2 = r.z_loc * r.z_loc;
      if (r.w_sech_half > 0.0) {
        ++a.samples_considered;
        a.fitted_constant = std::max(a.fitted_constant, safe_ratio(r.w_sech_half, z2 + std::exp(-B) * r.w_grad_sq));
      }
      if (r.w_loc > 0.0) {
        ++b.samples_considered;
        b.fitted_constant = std::max(b.fitted_constant, safe_ratio(r.w_loc * r.w_loc, z2 + r.w_grad_sq));
      }
    }
    a.worst_margin = b.worst_margin = 0.0;
    a.passed = std::isfinite(a.fitted_constant);
    b.passed = std::isfinite(b.fitted_constant);
    rep.entries.push_back(a);
    rep.entries.push_back(b);
  }
  {
    InequalityEntry a{"bound_I", "|I| <= c A |u1|_H1 |u2|", 0.0, 0.0, 0, 0.0, 0, static_cast<int>(rs.size()), false,
                      true};
    InequalityEntry b{"bound_J", "|J| <= c B |v1|_H1 |v2|", 0.0, 0.0, 0, 0.0, 0, static_cast<int>(rs.size()), false,
                      true};
    for (const auto& r : rs) {
      const double di = A * r.u1_h1 * r.u2_l2;
      const double dj = B * r.v1_h1 * r.v2_l2;
      if (di > 0.0) {
        ++a.samples_considered;
        a.fitted_constant = std::max(a.fitted_constant, std::abs(r.I_val) / di);
      }
      if (dj > 0.0) {
        ++b.samples_considered;
        b.fitted_constant = std::max(b.fitted_constant, std::abs(r.J_val) / dj);
      }
    }
    rep.entries.push_back(a);
    rep.entries.push_back(b);
  }
  {
    // Constant-free: where the modal part dominates, B must increase.
    InequalityEntry e{"modal_dominance", "dB/dt > 0 where a1^2 + a2^2 >= 10 |w|_loc^2", inf, 0.0, 0, nf_B, 0, total,
                      true, true};
    for (const auto* r : inner) {
      const double m2 = r->a1 * r->a1 + r->a2 * r->a2;
      if (m2 < 10.0 * r->w_loc * r->w_loc || std::abs(r->dB) < nf_B) continue;
      ++e.samples_considered;
      e.worst_margin = std::min(e.worst_margin, r->dB);
      if (r->dB <= 0.0) ++e.violation_count;
    }
    if (e.samples_considered == 0) e.worst_margin = 0.0;
    e.passed = e.violation_count == 0;
    rep.entries.push_back(e);
  }
  {
    const double c3 = rep.find("virial_H")->fitted_constant;
    const double c4 = rep.find("modal_B")->fitted_constant;
    InequalityEntry e{"combined", "dB/dt - 2 C4/C3 dH/dt >= nu0/4 (a1^2 + a2^2) + C4 |w|_loc^2", inf, 0.0, 0,
                      std::max(nf_B, nf_H), 0, total, false, true};
    if (c3 > 0.0 && std::isfinite(c4)) {
      const double k = 2.0 * c4 / c3;
      e.noise_floor = nf_B + k * nf_H;
      for (const auto* r : inner) {
        const double q = r->dB - k * r->dH - 0.25 * nu0 * (r->a1 * r->a1 + r->a2 * r->a2) - c4 * r->w_loc * r->w_loc;
        if (std::abs(q) < e.noise_floor) continue;
        ++e.samples_considered;
        e.worst_margin = std::min(e.worst_margin, q);
        if (q < 0.0) ++e.violation_count;
      }
      e.fitted_constant = k;
      e.passed = e.violation_count == 0;
    } else {
      e.passed = false;
    }
    if (e.samples_considered == 0) e.worst_margin = 0.0;
    rep.entries.push_back(e);
  }
  if (potential) {
    InequalityEntry e{"potential", "V >= V0 >= 0 pointwise", std::min(potential->min_gap(), potential->min_v0()), 0.0,
                      0, 0.0, potential->V.size(), potential->V.size(), true, true};
    double vmax = 0.0;
    for (double v : potential->V0.values) vmax = std::max(vmax, std::abs(v));
    const double tol = 1e-12 * vmax;
    for (int i = 0; i < potential->V.size(); ++i)
      if (potential->V[i] - potential->V0[i] < -tol || potential->V0[i] < -tol) ++e.violation_count;
    e.passed = e.violation_count == 0;
    rep.entries.push_back(e);
  }
  for (auto& e : rep.entries)
    if (!std::isfinite(e.worst_margin)) e.worst_margin = 0.0;
  return rep;
}

std::pair<double, double> integral_with_tail(const std::vector<double>& t, const std::vector<double>& y,
                                             double t_split) {
  double total = 0.0, tail = 0.0;
  for (size_t i = 0; i + 1 < t.size(); ++i) {
    const double piece = 0.5 * (t[i + 1] - t[i]) * (y[i] + y[i + 1]);
    total += piece;
    if (t[i] >= t_split - 1e-12) tail += piece;
  }
  return {total, total > 0.0 ? tail / total : 0.0};
}

EndgameReport endgame_diagnostics(const std::vector<VirialRecord>& rs, bool diverged) {
  EndgameReport e;
  e.diverged = diverged;
  if (rs.size() < 3) throw InsufficientSamples("endgame diagnostics need at least 3 records");
  const double t0 = rs.front().t;
  const double T = rs.back().t;
  std::vector<double> t, y_loc, y_sech, y_g;
  for (const auto& r : rs) {
    const double m2 = r.a1 * r.a1 + r.a2 * r.a2;
    t.push_back(r.t);
    y_loc.push_back(m2 + r.w_loc * r.w_loc);
    y_sech.push_back(m2 + r.u1_sech);
    y_g.push_back(m2 + r.G_val);
  }
  const double mid = 0.5 * (t0 + T);
  std::tie(e.decay_integral, e.decay_tail_fraction) = integral_with_tail(t, y_loc, mid);
  std::tie(e.sech_integral, e.sech_tail_fraction) = integral_with_tail(t, y_sech, mid);
  std::tie(e.g_integral, e.g_tail_fraction) = integral_with_tail(t, y_g, mid);

  for (const auto& r : rs)
    if (r.has_derivatives)
      e.g_derivative_constant = std::max(e.g_derivative_constant, safe_ratio(std::abs(r.dG), r.a1 * r.a1 + r.G_val));

  const double w = 0.1 * (T - t0);
  double g_init = 0.0, g_fin = 0.0, m_init = 0.0, m_fin = 0.0;
  for (const auto& r : rs) {
    const double m = std::abs(r.a1) + std::abs(r.a2);
    if (r.t <= t0 + w + 1e-12) {
      g_init = std::max(g_init, r.G_val);
      m_init = std::max(m_init, m);
    }
    if (r.t >= T - w - 1e-12) {
      g_fin = std::max(g_fin, r.G_val);
      m_fin = std::max(m_fin, m);
    }
  }
  e.g_decay_ratio = safe_ratio(g_fin, g_init);
  e.modal_decay_ratio = safe_ratio(m_fin, m_init);
  return e;
}

}  // namespace kglab
