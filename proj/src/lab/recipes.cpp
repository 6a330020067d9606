#include "kglab/lab/recipes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "kglab/decomposition.hpp"
#include "kglab/errors.hpp"
#include "kglab/lab/svg_plot.hpp"
#include "kglab/manifold.hpp"
#include "kglab/parallel.hpp"
#include "kglab/spectral.hpp"
#include "kglab/transform.hpp"
#include "kglab/virial.hpp"

namespace kglab::lab {

namespace {

using Clock = std::chrono::steady_clock;

void plot(RunManifest& m, const std::string& rel, const std::vector<Series>& series, const PlotStyle& style) {
  emit_plot(series, style, m.path(rel));
  m.add_file(rel);
}

std::vector<double> values(const Field& f) { return f.values; }

AdmissiblePerturbation perturbation(const LabConfig& c, std::uint64_t seed, const SpectralData& spec) {
  const auto& p = c.perturbation;
  if (p.kind == "random") return random_admissible(seed, p.size, spec);
  if (p.kind == "y_minus") return admissible_with_size(spec.modes.y_minus.phi1, spec.modes.y_minus.phi2, p.size, spec);
  if (p.kind == "zero") {
    AdmissiblePerturbation z;
    z.eps1 = Field(spec.grid.size());
    z.eps2 = Field(spec.grid.size());
    return z;
  }
  throw RecipeError("unknown perturbation kind '" + p.kind + "'");
}

WeightFamily weights(const LabConfig& c, double delta, const Grid& g) {
  if (!c.weights.from_delta) return make_weights(c.weights.A, c.weights.B, c.weights.gamma, g);
  if (!(delta > 0.0)) delta = c.shooting.delta0;
  return weights_for_delta(delta, c.weights.gamma, g);
}

void require_shooting_grid(const LabConfig& c, const SpectralData& spec) {
  if (c.shooting.dt > 0.5 * spec.grid.h())
    throw RecipeError("shooting.dt must be <= h/2 for the leapfrog CFL bound");
}

std::vector<VirialRecord> virial_series(const ShootingResult& r, const WeightFamily& wf, const SpectralData& spec,
                                        double delta) {
  std::vector<VirialRecord> out;
  out.reserve(r.states.size());
  for (size_t i = 0; i < r.states.size(); ++i) {
    const ModalState m = decompose(r.states[i], spec, r.times[i]);
    out.push_back(evaluate_functionals(m, transformed_state(m, wf, spec), wf, spec, delta));
  }
  differentiate_series(out);
  return out;
}

json shot_json(const ShootingResult& r) {
  json segs = json::array();
  for (const auto& s : r.segments)
    segs.push_back({{"t_start", s.t_start}, {"correction", s.correction}, {"radius", s.radius},
                    {"iterations", s.iterations}});
  return {{"h", r.b_plus_0},
          {"verdict", to_string(r.verdict)},
          {"exit_time", r.exit_time ? json(*r.exit_time) : json(nullptr)},
          {"iterations", r.iterations},
          {"final_width", r.final_width},
          {"eps_norm", r.eps_norm},
          {"tube_max_distance", r.tube_max_distance},
          {"bootstrap", {{"sup_u", r.bootstrap.sup_u}, {"sup_b_minus", r.bootstrap.sup_b_minus},
                         {"sup_b_plus", r.bootstrap.sup_b_plus}, {"c_u", r.bootstrap.c_u},
                         {"c_b_minus", r.bootstrap.c_b_minus}, {"c_b_plus", r.bootstrap.c_b_plus},
                         {"holds", r.bootstrap.holds}}},
          {"segments", segs}};
}

void shot_series(RunManifest& m, const std::string& stem, const ShootingResult& r) {
  m.csv(stem + ".csv", {{"t", r.times}, {"b_plus", r.b_plus}, {"b_minus", r.b_minus},
                        {"tube_distance", r.tube_distance}, {"boundary_energy", r.boundary_flux}});
  std::vector<double> ap, am;
  for (size_t i = 0; i < r.times.size(); ++i) {
    ap.push_back(std::abs(r.b_plus[i]));
    am.push_back(std::abs(r.b_minus[i]));
  }
  const bool log_y = r.tube_max_distance > 0.0;
  plot(m, stem + "_modes.svg", {{"|b+|", r.times, ap}, {"|b-|", r.times, am}, {"tube distance", r.times, r.tube_distance}},
       {"modal coordinates", "t", "size", log_y});
}

// ------------------------------------------------------------------ recipes

void spectrum(const LabConfig& c, RunManifest& m) {
  const SpectralData spec = make_spectral_data(c.model);
  const auto eig = even_spectrum(spec.L, c.spectrum_count);
  const SchrodingerOperator closed = build_operator(OperatorKind::L, c.model, spec.grid);
  const auto ev_closed = even_spectrum(closed, c.spectrum_count);
  json list = json::array();
  for (size_t i = 0; i < eig.size(); ++i)
    list.push_back({{"discrete_soliton", eig[i].eigenvalue}, {"residual", eig[i].residual},
                    {"closed_form", ev_closed[i].eigenvalue}, {"closed_form_residual", ev_closed[i].residual}});
  const double a = c.model.alpha;
  const double expected = -a * (a + 2.0);
  json doc = {{"alpha", a},
              {"grid", {{"x_max", spec.grid.x_max()}, {"n_points", spec.grid.size()}, {"h", spec.grid.h()}}},
              {"eigenvalues", list},
              {"lambda0", spec.lambda0},
              {"lambda0_expected", expected},
              {"nu0", spec.nu0},
              {"soliton_residual", spec.soliton_residual},
              {"even_eigenvalues_below_1", count_even_eigenvalues(spec.L, -1e300, 1.0)}};
  double lambda0 = ev_closed.front().eigenvalue;
  if (spec.grid.can_coarsen()) {
    lambda0 = extrapolated_even_eigenvalues(OperatorKind::L, c.model, spec.grid, 1).front().extrapolated;
    doc["lambda0_extrapolated"] = lambda0;
  }
  m.json_file("spectrum.json", doc);
  m.check("lambda0", std::abs(lambda0 - expected) <= 1e-4, {{"lambda0", lambda0}, {"expected", expected}});

  const RepulsivePotential rp = repulsive_potential(c.weights.B, c.model, spec.grid);
  const auto x = spec.grid.nodes();
  m.csv("profiles.csv", {{"x", x}, {"Q", values(spec.q_closed)}, {"Q_h", values(spec.q)}, {"Y0", values(spec.y0)},
                         {"V", values(rp.V)}, {"V0", values(rp.V0)}});
  plot(m, "profiles.svg", {{"Q", x, values(spec.q)}, {"Y0", x, values(spec.y0)}}, {"ground state and soliton", "x", ""});
  plot(m, "potentials.svg", {{"V", x, values(rp.V)}, {"V0", x, values(rp.V0)}},
       {"repulsive potential, B = " + format_double(c.weights.B), "x", ""});
}

void factorization(const LabConfig& c, RunManifest& m) {
  const Grid fine(c.model);
  if (!fine.can_coarsen()) throw RecipeError("factorization needs an odd node count to halve the grid");
  const Grid coarse = fine.coarsened();
  json probes = json::array();
  bool ok = true;
  for (double width : {0.5, 1.0, 2.0}) {
    auto g = [width](double x) { return std::exp(-(x / width) * (x / width)); };
    const auto rf = intertwining_residual(c.model, fine, sample(fine, g));
    const auto rc = intertwining_residual(c.model, coarse, sample(coarse, g));
    const double ru = rc.ul / rf.ul, rs = rc.sul / rf.sul;
    ok = ok && ru >= 3.5 && ru <= 4.5 && rs >= 3.5 && rs <= 4.5;
    probes.push_back({{"width", width}, {"ul", rf.ul}, {"ul_coarse", rc.ul}, {"ul_ratio", ru}, {"sul", rf.sul},
                      {"sul_coarse", rc.sul}, {"sul_ratio", rs}});
  }
  m.json_file("factorization.json", {{"alpha", c.model.alpha}, {"h", fine.h()}, {"probes", probes}});
  m.check("intertwining_order_two", ok, probes);

  const double a = c.model.alpha;
  const auto x = fine.nodes();
  std::vector<double> vl, vm, v0;
  for (double xi : x) {
    vl.push_back(closed_form_potential(OperatorKind::L, xi, a));
    vm.push_back(closed_form_potential(OperatorKind::Lminus, xi, a));
    v0.push_back(closed_form_potential(OperatorKind::Lzero, xi, a));
  }
  m.csv("potentials.csv", {{"x", x}, {"L", vl}, {"L_minus", vm}, {"L_zero", v0}});
  plot(m, "potentials.svg", {{"L", x, vl}, {"L-", x, vm}, {"L0", x, v0}}, {"partner potentials", "x", ""});
}

void linear_modes(const LabConfig& c, RunManifest& m) {
  const SpectralData spec = make_spectral_data(c.model);
  const LinearModeFit fit = linear_mode_rates(spec);
  const double eg = std::abs(fit.growth_rate / spec.nu0 - 1.0), ed = std::abs(-fit.decay_rate / spec.nu0 - 1.0);
  m.json_file("linear_modes.json", {{"alpha", c.model.alpha}, {"nu0", spec.nu0}, {"growth_rate", fit.growth_rate},
                                    {"decay_rate", fit.decay_rate}, {"growth_rel_error", eg},
                                    {"decay_rel_error", ed}});
  m.csv("linear_modes.csv", {{"t", fit.t}, {"b_plus", fit.b_plus}, {"b_minus", fit.b_minus}});
  std::vector<double> ap, am;
  for (size_t i = 0; i < fit.t.size(); ++i) {
    ap.push_back(std::abs(fit.b_plus[i]));
    am.push_back(std::abs(fit.b_minus[i]));
  }
  plot(m, "linear_modes.svg", {{"|b+|", fit.t, ap}, {"|b-|", fit.t, am}}, {"linear modes", "t", "", true});
  m.check("growth_rate", eg <= 0.02, {{"rel_error", eg}});
  m.check("decay_rate", ed <= 0.02, {{"rel_error", ed}});
}

void virial_audit(const LabConfig& c, RunManifest& m) {
  const SpectralData spec = make_spectral_data(c.model);
  require_shooting_grid(c, spec);
  const auto eps = perturbation(c, c.seed, spec);
  const ShootingResult r = shoot(eps, c.shooting, spec);
  if (r.verdict != Verdict::trapped_to_t_max)
    throw RecipeError("virial_audit needs a trapped run, got " + to_string(r.verdict));
  const double delta = r.tube_max_distance > 0.0 ? r.tube_max_distance : c.shooting.delta0;
  const WeightFamily wf = weights(c, delta, spec.grid);
  const auto recs = virial_series(r, wf, spec, delta);
  const RepulsivePotential rp = repulsive_potential(wf, c.model, spec.grid);
  const InequalityReport rep = check_inequalities(recs, spec.nu0, delta, &rp);

  std::vector<double> t, I, J, H, B, K, G, dH, dB, w2, margin;
  for (const auto& v : recs) {
    if (!v.has_derivatives) continue;
    t.push_back(v.t);
    I.push_back(v.I_val);
    J.push_back(v.J_val);
    H.push_back(v.H_val);
    B.push_back(v.B_val);
    K.push_back(v.K_val);
    G.push_back(v.G_val);
    dH.push_back(v.dH);
    dB.push_back(v.dB);
    w2.push_back(v.w_loc * v.w_loc);
    margin.push_back(-v.w_loc * v.w_loc);
  }
  m.csv("virial.csv", {{"t", t}, {"I", I}, {"J", J}, {"H", H}, {"B", B}, {"K", K}, {"G", G}, {"dH", dH}, {"dB", dB},
                       {"w_loc_sq", w2}});
  plot(m, "virial_margin.svg", {{"dH/dt", t, dH}, {"-|w|_loc^2", t, margin}}, {"virial margin", "t", ""});
  plot(m, "functionals.svg", {{"I", t, I}, {"J", t, J}, {"H", t, H}}, {"virial functionals", "t", ""});

  json entries = json::array();
  for (const auto& e : rep.entries) {
    json row = {{"name", e.name}, {"relation", e.relation}, {"worst_margin", e.worst_margin},
                {"fitted_constant", e.fitted_constant}, {"violations", e.violation_count},
                {"noise_floor", e.noise_floor}, {"samples_considered", e.samples_considered},
                {"samples_total", e.samples_total}, {"hard", e.hard}, {"passed", e.passed}};
    m.check(e.name, e.passed, row, e.hard);
    entries.push_back(row);
  }
  m.json_file("virial_audit.json", {{"shot", shot_json(r)}, {"delta", delta}, {"A", wf.A}, {"B", wf.B},
                                    {"gamma", wf.gamma}, {"inequalities", entries}});
}

void shoot_recipe(const LabConfig& c, RunManifest& m) {
  const SpectralData spec = make_spectral_data(c.model);
  require_shooting_grid(c, spec);
  const int n = std::max(1, c.perturbation.count);
  const auto runs = parallel_map<ShootingResult>(n, [&](int k) {
    ShootingResult r = shoot(perturbation(c, c.seed + static_cast<std::uint64_t>(k), spec), c.shooting, spec);
    r.states.clear();
    return r;
  });
  json list = json::array();
  for (int k = 0; k < n; ++k) {
    const auto& r = runs[static_cast<size_t>(k)];
    const std::string stem = "shoot_seed" + std::to_string(c.seed + static_cast<std::uint64_t>(k));
    shot_series(m, stem, r);
    json row = shot_json(r);
    row["seed"] = c.seed + static_cast<std::uint64_t>(k);
    list.push_back(row);
    m.check(stem + "_trapped", r.verdict == Verdict::trapped_to_t_max, {{"h", r.b_plus_0}, {"verdict", to_string(r.verdict)}});
  }
  m.json_file("shoot.json", {{"alpha", c.model.alpha}, {"bracket", c.shooting.effective_bracket()}, {"runs", list}});
}

void lipschitz(const LabConfig& c, RunManifest& m) {
  const SpectralData spec = make_spectral_data(c.model);
  require_shooting_grid(c, spec);
  json list = json::array();
  std::vector<double> deltas, maxima;
  for (double delta : c.lipschitz_deltas) {
    ShootingConfig cfg = c.shooting;
    cfg.delta0 = delta;
    const auto rep = lipschitz_probe(lipschitz_pairs(c.seed, c.lipschitz_pairs, delta, spec), cfg, spec);
    std::vector<double> ha, hb, dist, ratio;
    for (const auto& p : rep.pairs) {
      ha.push_back(p.h_a);
      hb.push_back(p.h_b);
      dist.push_back(p.distance);
      ratio.push_back(p.ratio);
    }
    m.csv("lipschitz_delta" + format_double(delta) + ".csv",
          {{"h_a", ha}, {"h_b", hb}, {"distance", dist}, {"ratio", ratio}});
    list.push_back({{"delta", delta}, {"max_ratio", rep.max_ratio}, {"scaled_constant", rep.scaled_constant}});
    deltas.push_back(delta);
    maxima.push_back(rep.max_ratio);
    m.check("finite_delta" + format_double(delta), std::isfinite(rep.max_ratio), {{"max_ratio", rep.max_ratio}});
  }
  m.json_file("lipschitz.json", {{"alpha", c.model.alpha}, {"deltas", list}});
  if (deltas.size() >= 2) plot(m, "lipschitz.svg", {{"max ratio", deltas, maxima}}, {"Lipschitz ratio", "delta", "", true});
}

void decay(const LabConfig& c, RunManifest& m) {
  const SpectralData spec = make_spectral_data(c.model);
  require_shooting_grid(c, spec);
  const ShootingResult r = shoot(perturbation(c, c.seed, spec), c.shooting, spec);
  const std::vector<double> widths{5.0, 10.0, 20.0};
  const StabilityVerdict sv = stability_verdict(r, widths, spec);
  const double delta = r.tube_max_distance > 0.0 ? r.tube_max_distance : c.shooting.delta0;
  const WeightFamily wf = weights(c, delta, spec.grid);
  const EndgameReport eg = endgame_diagnostics(virial_series(r, wf, spec, delta), r.verdict != Verdict::trapped_to_t_max);

  std::vector<Column> cols{{"t", r.times}};
  std::vector<Series> series;
  json windows = json::array();
  for (const auto& w : sv.windows) {
    const std::string name = "loc_distance_" + format_double(w.half_width);
    cols.push_back({name, w.distance});
    series.push_back({"I = [-" + format_double(w.half_width) + ", " + format_double(w.half_width) + "]", r.times,
                      w.distance});
    windows.push_back({{"half_width", w.half_width}, {"initial_average", w.initial_average},
                       {"final_average", w.final_average}, {"ratio", w.ratio}, {"integral", w.integral},
                       {"tail_fraction", w.tail_fraction}, {"decays", w.decays}});
  }
  m.csv("decay.csv", cols);
  if (!r.times.empty()) plot(m, "local_distance.svg", series, {"local distance to (Q, 0)", "t", "", true});
  json doc = {{"shot", shot_json(r)},
              {"in_scope", sv.in_scope},
              {"asymptotically_stable", sv.asymptotically_stable},
              {"windows", windows},
              {"endgame", {{"decay_integral", eg.decay_integral}, {"decay_tail_fraction", eg.decay_tail_fraction},
                           {"sech_integral", eg.sech_integral}, {"sech_tail_fraction", eg.sech_tail_fraction},
                           {"g_integral", eg.g_integral}, {"g_tail_fraction", eg.g_tail_fraction},
                           {"g_derivative_constant", eg.g_derivative_constant},
                           {"g_decay_ratio", eg.g_decay_ratio}, {"modal_decay_ratio", eg.modal_decay_ratio}}}};
  m.json_file("decay.json", doc);
  m.check("trapped", r.verdict == Verdict::trapped_to_t_max, {{"verdict", to_string(r.verdict)}});
  m.check("local_decay", sv.asymptotically_stable, windows);
}

void sweep_alpha(const LabConfig& c, RunManifest& m) {
  struct Row {
    double alpha = 0.0, h = 0.0, tube = 0.0, window_ratio = 0.0;
    std::string verdict;
    EndgameReport eg;
  };
  const int n = static_cast<int>(c.sweep_alphas.size());
  const auto rows = parallel_map<Row>(n, [&](int k) {
    ModelParams p = c.model;
    p.alpha = c.sweep_alphas[static_cast<size_t>(k)];
    const SpectralData spec = make_spectral_data(p);
    require_shooting_grid(c, spec);
    const ShootingResult r = shoot(perturbation(c, c.seed, spec), c.shooting, spec);
    const double delta = r.tube_max_distance > 0.0 ? r.tube_max_distance : c.shooting.delta0;
    Row row;
    row.alpha = p.alpha;
    row.h = r.b_plus_0;
    row.tube = r.tube_max_distance;
    row.verdict = to_string(r.verdict);
    row.window_ratio = stability_verdict(r, {5.0}, spec).windows.front().ratio;
    row.eg = endgame_diagnostics(virial_series(r, weights(c, delta, spec.grid), spec, delta),
                                 r.verdict != Verdict::trapped_to_t_max);
    return row;
  });
  std::vector<double> a, h, di, dt, si, gi, wr;
  json list = json::array();
  for (const auto& r : rows) {
    a.push_back(r.alpha);
    h.push_back(r.h);
    di.push_back(r.eg.decay_integral);
    dt.push_back(r.eg.decay_tail_fraction);
    si.push_back(r.eg.sech_integral);
    gi.push_back(r.eg.g_integral);
    wr.push_back(r.window_ratio);
    list.push_back({{"alpha", r.alpha}, {"h", r.h}, {"verdict", r.verdict}, {"tube_max_distance", r.tube},
                    {"decay_integral", r.eg.decay_integral}, {"decay_tail_fraction", r.eg.decay_tail_fraction},
                    {"sech_integral", r.eg.sech_integral}, {"g_integral", r.eg.g_integral},
                    {"window_ratio", r.window_ratio}});
    m.check("trapped_alpha" + format_double(r.alpha), r.verdict == "trapped_to_t_max", {{"h", r.h}});
  }
  m.csv("sweep_alpha.csv", {{"alpha", a}, {"h", h}, {"decay_integral", di}, {"decay_tail_fraction", dt},
                            {"sech_integral", si}, {"g_integral", gi}, {"window_ratio", wr}});
  m.json_file("sweep_alpha.json", {{"seed", c.seed}, {"rows", list}});
  plot(m, "sweep_alpha.svg", {{"decay integral", a, di}, {"sech integral", a, si}, {"G integral", a, gi}},
       {"decay integrals by alpha", "alpha", "", true});
}

}  // namespace

RunManifest run_experiment(const LabConfig& config) {
  config.validate();
  static const std::map<std::string, std::function<void(const LabConfig&, RunManifest&)>> recipes{
      {"spectrum", spectrum},         {"factorization", factorization}, {"linear_modes", linear_modes},
      {"virial_audit", virial_audit}, {"shoot", shoot_recipe},          {"lipschitz", lipschitz},
      {"decay", decay},               {"sweep_alpha", sweep_alpha}};
  const auto it = recipes.find(config.experiment);
  if (it == recipes.end()) throw ConfigError("unknown experiment '" + config.experiment + "'");
  RunManifest m(config.output_dir + "/" + config.experiment);
  const auto t0 = Clock::now();
  it->second(config, m);
  m.timing(config.experiment, std::chrono::duration<double>(Clock::now() - t0).count());
  m.write(snapshot(config));
  return m;
}

}  // namespace kglab::lab
