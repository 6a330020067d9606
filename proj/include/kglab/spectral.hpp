#pragma once

#include <string>
#include <vector>

#include "kglab/domain_model.hpp"
#include "kglab/grid.hpp"
#include "kglab/tridiag.hpp"

namespace kglab {

enum class OperatorKind { L, Lminus, Lzero };
std::string to_string(OperatorKind k);

// A = -d^2/dx^2 + potential, mirror node at x=0, Dirichlet at x_max.
struct SchrodingerOperator {
  OperatorKind kind = OperatorKind::L;
  Field potential;
  Grid grid{1.0, 16};

  Field apply(const Field& f) const;
  // Even sector in the symmetrized variables y = W^{1/2} u over nodes 0..n-2.
  tridiag::SymTridiag even_matrix() const;
};

double closed_form_potential(OperatorKind kind, double x, double alpha);
SchrodingerOperator build_operator(OperatorKind kind, const ModelParams& params, const Grid& grid);
SchrodingerOperator operator_from_potential(OperatorKind kind, Field potential, const Grid& grid);

struct EigenPair {
  double eigenvalue = 0.0;
  Field eigenfunction;  // <psi, psi> = 1 under the mirrored trapezoid rule, psi(0) > 0
  double residual = 0.0;
};

std::vector<EigenPair> even_spectrum(const SchrodingerOperator& op, int k);
// Number of even eigenvalues in [lo, hi).
int count_even_eigenvalues(const SchrodingerOperator& op, double lo, double hi);

struct ExtrapolatedEigenvalue {
  double fine = 0.0;    // grid h
  double coarse = 0.0;  // grid 2h
  double extrapolated = 0.0;
};
// k lowest even eigenvalues of the closed-form operator on grid and grid.coarsened(),
// combined as (4 fine - coarse)/3.
std::vector<ExtrapolatedEigenvalue> extrapolated_even_eigenvalues(OperatorKind kind, const ModelParams& params,
                                                                  const Grid& grid, int k);

double rayleigh_quotient(const SchrodingerOperator& op, const Field& f);
// min <Au,u>/<u,u> over even u with <u,y> = 0, from the rank-one secular equation.
double constrained_min_rayleigh(const SchrodingerOperator& op, const Field& y);

enum class FactorKind { U, S, Ustar, Sstar };

struct FirstOrderFactor {
  FactorKind kind = FactorKind::U;
  Field weight;          // Y0 for U, U*; Q for S, S*
  Field log_derivative;  // weight'/weight, closed form, odd
  bool adjoint() const { return kind == FactorKind::Ustar || kind == FactorKind::Sstar; }
};

FirstOrderFactor make_factor(FactorKind kind, const ModelParams& params, const Grid& grid);
// Forward: f' - (w'/w) f. Adjoint: -f' - (w'/w) f.
Field apply_factor(const FirstOrderFactor& factor, const Field& f, const Grid& grid);

struct IntertwiningResidual {
  double ul = 0.0;   // ||(U L - L_- U) f|| / ||f||
  double sul = 0.0;  // ||(S U L - L_0 S U) f|| / ||f||
};
IntertwiningResidual intertwining_residual(const ModelParams& params, const Grid& grid, const Field& probe);

// f'' + (alpha+2) tanh(alpha x) f' + (alpha+1)(1 + (alpha-1) sech^2(alpha x)) f
Field composite_su(const Field& f, const ModelParams& params, const Grid& grid);

struct ModeVectors {
  FieldPair y_plus, y_minus, z_plus, z_minus;
};
ModeVectors mode_vectors(const Field& y0, double nu0);

// Discrete soliton, its linearized operator and the normalized ground state:
// everything the modal decomposition and shooting project against.
struct SpectralData {
  ModelParams params;
  Grid grid{1.0, 16};
  Field q;          // discrete soliton
  Field q_closed;   // closed form, for comparison
  SchrodingerOperator L;  // linearized at q
  Field y0;
  double lambda0 = 0.0;
  double nu0 = 0.0;
  double soliton_residual = 0.0;
  ModeVectors modes;
};

SpectralData make_spectral_data(const ModelParams& params);

}  // namespace kglab
