#pragma once

#include <cmath>

#include "kglab/grid.hpp"

namespace kglab {

// |q|^p with exact integer and quarter-integer fast paths; the leapfrog force
// evaluates this at every node of every step.
class AbsPower {
 public:
  explicit AbsPower(double p);
  double operator()(double q) const;
  double exponent() const { return p_; }

 private:
  enum class Path { integer, quarter, general } path_;
  double p_;
  int k_ = 0;
};

double soliton_value(double x, double alpha);
Field soliton_profile(const ModelParams& params, const Grid& grid);
// Q'/Q = -tanh(alpha x) and Y0'/Y0 = -(alpha+1) tanh(alpha x).
double soliton_log_derivative(double x, double alpha);
double ground_state_log_derivative(double x, double alpha);

double nonlinearity(double phi, const ModelParams& params);
double antiderivative(double phi, const ModelParams& params);
double nonlinearity_d1(double phi, const ModelParams& params);
double nonlinearity_d2(double phi, const ModelParams& params);

struct EnergyBreakdown {
  double kinetic = 0.0;
  double gradient = 0.0;
  double mass = 0.0;
  double potential = 0.0;  // integral of F(phi1)
  double total = 0.0;
};

EnergyBreakdown energy(const FieldPair& state, const ModelParams& params, const Grid& grid);

// max over interior nodes of |Q'' - Q + Q^{2alpha+1}| for the sampled closed form.
double soliton_residual(const ModelParams& params, const Grid& grid);

struct DiscreteSoliton {
  Field q;
  int newton_iterations = 0;
  double residual = 0.0;  // sup norm of d2 q - q + f(q) on interior nodes
};

// Even equilibrium of the semi-discrete system, Newton-refined from the closed form.
DiscreteSoliton discrete_soliton(const ModelParams& params, const Grid& grid);

struct ModalState;
struct SpectralData;
// -4 nu0^2 b+ b- + ||u2||^2 + <L u1, u1>, to be compared with 2(E - E(Q,0)).
double quadratic_energy_expansion(const ModalState& modal, const SpectralData& spec);

}  // namespace kglab
