#pragma once

#include <string>
#include <vector>

#include "kglab/decomposition.hpp"
#include "kglab/grid.hpp"
#include "kglab/transform.hpp"

namespace kglab {

struct VirialRecord {
  double t = 0.0;
  double I_val = 0.0, J_val = 0.0, H_val = 0.0, B_val = 0.0, K_val = 0.0, G_val = 0.0;
  double w_loc = 0.0, z_loc = 0.0;
  double a1_abs = 0.0;
  bool has_derivatives = false;
  double dI = 0.0, dJ = 0.0, dH = 0.0, dB = 0.0, dK = 0.0, dG = 0.0;

  // Side quantities the inequality probes need.
  double a1 = 0.0, a2 = 0.0;
  double w_grad_sq = 0.0;    // int (w')^2
  double w_sech_half = 0.0;  // int w^2 sech(x/2)
  double u1_sech = 0.0;      // int [(u1')^2 + u1^2] sech(x)
  double u1_h1 = 0.0, u2_l2 = 0.0, v1_h1 = 0.0, v2_l2 = 0.0;
};

// H = J + 8 delta^{1/10} I with the run's delta.
VirialRecord evaluate_functionals(const ModalState& modal, const TransformedState& tr, const WeightFamily& weights,
                                  const SpectralData& spec, double delta);

void differentiate_series(std::vector<VirialRecord>& records);

// |LHS - RHS| of the weighted integration-by-parts identity for u1 on the A-scale.
double check_virial_identity(const Field& u1, const WeightFamily& weights, const Grid& grid);

struct NonlinearBound {
  double lhs = 0.0;  // int zeta_A^2 |u1|^{2 alpha + 2}
  double rhs = 0.0;  // (4/3)((alpha+1)/alpha)^2 A^2 |u1|_inf^{2 alpha} int (w')^2, w = zeta_A u1
  bool holds() const { return lhs <= rhs; }
};

NonlinearBound nonlinear_weighted_bound(const Field& u1, double A, const ModelParams& params, const Grid& grid);

struct RepulsivePotential {
  double B = 0.0;
  Field V, V0;
  double min_gap() const;  // min (V - V0)
  double min_v0() const;
};

RepulsivePotential repulsive_potential(double B, const ModelParams& params, const Grid& grid);
RepulsivePotential repulsive_potential(const WeightFamily& weights, const ModelParams& params, const Grid& grid);

struct PositivityScan {
  std::vector<double> B;
  std::vector<double> min_gap;
  std::vector<double> min_v0;
  double B0 = -1.0;  // smallest tested B from which every larger tested B passes; -1 if none
  bool degenerate = false;  // V0 vanishes identically (alpha = 1)
};

PositivityScan positivity_threshold(const ModelParams& params, const Grid& grid, const std::vector<double>& Bs);

struct InequalityEntry {
  std::string name;
  std::string relation;
  double worst_margin = 0.0;
  double fitted_constant = 0.0;
  int violation_count = 0;
  double noise_floor = 0.0;
  int samples_considered = 0;
  int samples_total = 0;
  bool hard = false;
  bool passed = true;
};

struct InequalityReport {
  std::vector<InequalityEntry> entries;
  bool hard_ok() const;
  const InequalityEntry* find(const std::string& name) const;
};

InequalityReport check_inequalities(const std::vector<VirialRecord>& records, double nu0, double delta,
                                    const RepulsivePotential* potential = nullptr);

struct EndgameReport {
  double decay_integral = 0.0;     // int (a1^2 + a2^2 + ||w||_loc^2) dt
  double decay_tail_fraction = 0.0;
  double sech_integral = 0.0;      // int (a1^2 + a2^2 + int[(u1')^2 + u1^2] sech) dt
  double sech_tail_fraction = 0.0;
  double g_integral = 0.0;         // int (a1^2 + a2^2 + G) dt
  double g_tail_fraction = 0.0;
  double g_derivative_constant = 0.0;  // max |dG|/(a1^2 + G)
  double g_decay_ratio = 0.0;          // final-window max G / initial-window max G
  double modal_decay_ratio = 0.0;      // same for |a1| + |a2|
  bool diverged = false;
};

EndgameReport endgame_diagnostics(const std::vector<VirialRecord>& records, bool diverged = false);

// Trapezoid integral of y over t and the share carried by t >= t_split.
std::pair<double, double> integral_with_tail(const std::vector<double>& t, const std::vector<double>& y, double t_split);

}  // namespace kglab
