#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kglab/decomposition.hpp"
#include "kglab/grid.hpp"
#include "kglab/spectral.hpp"

namespace kglab {

struct AdmissiblePerturbation {
  Field eps1, eps2;
  double norm = 0.0;  // H1 x L2
  double b_minus = 0.0;
  FieldPair pair() const { return {eps1, eps2}; }
  bool is_zero() const;
};

// Removes the Z+ component: eps = raw - <raw, Z+>/2 Y+.
AdmissiblePerturbation admissible_from_raw(const Field& raw1, const Field& raw2, const SpectralData& spec);
// Projection followed by rescaling to H1 x L2 size `size`.
AdmissiblePerturbation admissible_with_size(const Field& raw1, const Field& raw2, double size,
                                            const SpectralData& spec);

struct Bump {
  double center, width, weight;
};

// Three even Gaussian bumps per component, centers in [0,6], widths in [0.5,2], weights in [-1,1].
std::vector<Bump> random_bumps(std::uint64_t seed, int count = 3);
Field bump_field(const Grid& grid, const std::vector<Bump>& bumps);
// Raw pair from one seed: eps1 from the first three bumps, eps2 from the next three.
FieldPair random_raw_pair(std::uint64_t seed, const Grid& grid);
AdmissiblePerturbation random_admissible(std::uint64_t seed, double size, const SpectralData& spec);

struct ShootingConfig {
  double delta0 = 1e-3;
  double K = 4.0;
  double bracket = 0.0;        // <= 0: K^5 delta0^2
  double t_max = 100.0;
  double bisection_tol = 0.0;  // <= 0: 4e-12 * bracket
  int max_iters = 40;
  double dt = 5e-3;
  double record_interval = 0.25;
  int exit_check_stride = 10;
  // Classification trials keep integrating this long past t_max so late segments still separate.
  double exit_lookahead = 20.0;
  // Restart a continuation segment once the straddling pair differs in b+ by this share of the bracket.
  double divergence_fraction = 1e-5;
  bool continuation = true;
  int max_segments = 400;
  double boundary_layer = 5.0;
  // Contamination once the outer-layer energy exceeds this share of the initial deviation energy.
  double boundary_threshold = 1e-6;

  void validate() const;
  double effective_bracket() const { return bracket > 0.0 ? bracket : std::pow(K, 5) * delta0 * delta0; }
  double effective_tol() const { return bisection_tol > 0.0 ? bisection_tol : 4e-12 * effective_bracket(); }
};

enum class Verdict { trapped_to_t_max, exited_plus, exited_minus, boundary_contaminated };
std::string to_string(Verdict v);

struct Segment {
  double t_start = 0.0;
  double correction = 0.0;  // added along Y+ at t_start
  double radius = 0.0;
  int iterations = 0;
};

struct BootstrapShape {
  double sup_u = 0.0;        // sup_t max(|u1|_H1, |u2|_L2)
  double sup_b_minus = 0.0;
  double sup_b_plus = 0.0;
  double c_u = 0.0, c_b_minus = 0.0, c_b_plus = 0.0;  // sup / delta0, sup / delta0, sup / delta0^2
  bool holds = false;        // c_u <= K^2, c_b_minus <= K, c_b_plus <= K^5
};

struct ShootingResult {
  double b_plus_0 = 0.0;
  Verdict verdict = Verdict::trapped_to_t_max;
  std::optional<double> exit_time;
  int iterations = 0;
  double final_width = 0.0;
  double eps_norm = 0.0;
  std::vector<Segment> segments;

  // Stitched trajectory at record_interval spacing.
  std::vector<double> times;
  std::vector<FieldPair> states;
  std::vector<double> b_plus, b_minus, tube_distance, boundary_flux;
  double tube_max_distance = 0.0;
  BootstrapShape bootstrap;
  std::string archive_path;
};

ShootingResult shoot(const AdmissiblePerturbation& eps, const ShootingConfig& config, const SpectralData& spec);

struct ControlRun {
  double b_plus_0 = 0.0;
  Verdict verdict = Verdict::trapped_to_t_max;
  std::optional<double> exit_time;
  double growth_rate = 0.0;  // fitted d ln|b+|/dt while |b+| in [bracket, 10 bracket]
};

// Off-manifold run from (Q,0) + eps + b Y+, continued past the exit until |b+| reaches 10 bracket.
ControlRun control_run(const AdmissiblePerturbation& eps, double b_plus_0, const ShootingConfig& config,
                       const SpectralData& spec);

struct LipschitzPair {
  double h_a = 0.0, h_b = 0.0, distance = 0.0, ratio = 0.0;
  int iterations_a = 0, iterations_b = 0;
};

struct LipschitzReport {
  double delta = 0.0;
  std::vector<LipschitzPair> pairs;
  double max_ratio = 0.0;
  double scaled_constant = 0.0;  // max_ratio / delta^{1/2}
};

using PerturbationPair = std::pair<AdmissiblePerturbation, AdmissiblePerturbation>;
// count - 1 pairs (raw_a, 0.8 raw_a + 0.2 raw_b) from consecutive seeds, then one (eps, -eps) pair; all of size delta.
std::vector<PerturbationPair> lipschitz_pairs(std::uint64_t seed, int count, double delta, const SpectralData& spec);

// Pairs run concurrently; continuation is switched off since only h is compared.
LipschitzReport lipschitz_probe(const std::vector<PerturbationPair>& pairs,
                                const ShootingConfig& config, const SpectralData& spec);

struct WindowVerdict {
  double half_width = 0.0;
  std::vector<double> distance;  // local H1 x L2 distance to (Q,0) per record
  double initial_average = 0.0, final_average = 0.0, ratio = 0.0;
  double integral = 0.0, tail_fraction = 0.0;
  bool decays = false;
};

struct StabilityVerdict {
  bool in_scope = false;  // trapped run
  std::vector<WindowVerdict> windows;
  bool asymptotically_stable = false;
};

// Windows are compared over the first and last tenth of the run; the integral tail is [T/2, T].
StabilityVerdict stability_verdict(const ShootingResult& result, const std::vector<double>& half_widths,
                                   const SpectralData& spec);

}  // namespace kglab
