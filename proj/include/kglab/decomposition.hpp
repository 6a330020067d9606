#pragma once

#include <vector>

#include "kglab/grid.hpp"
#include "kglab/spectral.hpp"

namespace kglab {

struct ModalState {
  double a1 = 0.0, a2 = 0.0;
  double b_plus = 0.0, b_minus = 0.0;
  Field u1, u2;
  double t = 0.0;
};

struct RemainderTerms {
  Field n_field;
  double n0 = 0.0;
  Field n_perp;
};

ModalState decompose(const FieldPair& state, const SpectralData& spec, double t = 0.0);
FieldPair reconstruct(const ModalState& modal, const SpectralData& spec);
// b_plus from the state alone: two projections, no remainder fields.
double unstable_coordinate(const FieldPair& state, const SpectralData& spec);

RemainderTerms remainder_terms(const ModalState& modal, const SpectralData& spec);

struct ModalResidual {
  double t = 0.0;
  double a1 = 0.0;       // da1/dt - nu0 a2
  double a2 = 0.0;       // da2/dt - nu0 a1 - N0/nu0
  double b_plus = 0.0;   // db+/dt - nu0 b+ - N0/(2 nu0)
  double b_minus = 0.0;  // db-/dt + nu0 b- + N0/(2 nu0)
  double u2 = 0.0;       // ||du2/dt + L u1 - N_perp||
};

// Centered differences at the spacing of the series (interior samples only).
std::vector<ModalResidual> modal_ode_residual(const std::vector<ModalState>& series, const SpectralData& spec);

// Least-squares slope of ln|y| against t; samples with y == 0 are skipped.
double log_linear_rate(const std::vector<double>& t, const std::vector<double>& y);

struct LinearModeFit {
  double nu0 = 0.0;
  double growth_rate = 0.0;  // fitted from b+ of (Q,0) + s Y+
  double decay_rate = 0.0;   // fitted from b- of (Q,0) + s Y-
  std::vector<double> t, b_plus, b_minus;
};

LinearModeFit linear_mode_rates(const SpectralData& spec, double s = 1e-6, double t_fit = 3.0, double dt = 1e-3,
                                int record_stride = 100);

struct EquilibriumDrift {
  std::vector<double> t, relative_drift;
  double max_relative_drift = 0.0;
  double max_correction = 0.0;    // largest b+ removed at a record
  double raw_departure_time = -1.0;  // uncorrected run: first record with |b+| >= departure level, -1 if none
};

// Evolves (Q,0) and removes the Y+ component at every record, which keeps the run on the
// equilibrium; the same run without removal is timed until |b+| reaches departure_level.
EquilibriumDrift equilibrium_energy_drift(const SpectralData& spec, double t_max, double dt, int record_stride,
                                          double departure_level = 1e-3);

}  // namespace kglab
