#pragma once

#include <optional>
#include <vector>

#include "kglab/domain_model.hpp"
#include "kglab/grid.hpp"

namespace kglab {

struct IntegratorConfig {
  enum class Boundary { dirichlet_far };
  enum class Scheme { leapfrog };

  double dt = 1e-3;
  double t_max = 10.0;
  int record_stride = 100;
  Boundary boundary = Boundary::dirichlet_far;
  Scheme scheme = Scheme::leapfrog;
  double blowup_ceiling = 0.0;  // <= 0 means 10 Q(0)
  double boundary_layer = 5.0;  // width of the outer monitoring layer
  bool throw_on_blowup = true;

  void validate(const Grid& grid) const;
  double ceiling(const ModelParams& params) const;
  long total_steps() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<FieldPair> states;
  // Energy held in the outer layer [x_max - boundary_layer, x_max] (both sides).
  std::vector<double> boundary_flux;
  std::vector<double> energy;
  std::optional<double> blowup_time;
};

// Kick-drift-kick Stormer-Verlet for (phi1' = phi2, phi2' = phi1_xx - phi1 + f(phi1)).
// Keeps the force of the current state cached between steps.
class Leapfrog {
 public:
  using Kernel = void (*)(double* q, double* p, double* force, int n, double ih2, double dt, double exponent,
                          long steps);

  Leapfrog(const ModelParams& params, const Grid& grid, double dt);

  void set_state(const FieldPair& s);
  const FieldPair& state() const { return s_; }
  // Advances n steps; returns max |phi1| of the final state (NaN if it went non-finite).
  double advance(long n);
  void set_dt(double dt) { dt_ = dt; }
  double dt() const { return dt_; }

 private:
  void compute_force();

  ModelParams params_;
  Grid grid_;
  double dt_;
  AbsPower pow_;
  Kernel kernel_;
  FieldPair s_;
  std::vector<double> force_;
};

FieldPair step(const FieldPair& state, const IntegratorConfig& config, const ModelParams& params, const Grid& grid);
Trajectory evolve(const FieldPair& initial, const IntegratorConfig& config, const ModelParams& params,
                  const Grid& grid);

double boundary_layer_energy(const FieldPair& s, const Grid& grid, double width);

}  // namespace kglab
