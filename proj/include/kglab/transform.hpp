#pragma once

#include "kglab/decomposition.hpp"
#include "kglab/grid.hpp"
#include "kglab/spectral.hpp"

namespace kglab {

// Smooth even cutoff: 1 on [-1,1], 0 outside [-2,2], glued with exp(-1/s).
// Derivatives are with respect to x.
double chi(double x);
double chi_d1(double x);
double chi_d2(double x);

struct WeightFamily {
  double A = 0.0, B = 0.0, gamma = 0.0;
  Field chi;
  Field zeta_A, phi_A;
  Field log_bracket_A;  // zeta_A''/zeta_A - (zeta_A'/zeta_A)^2 = (chi''|x| + 2 chi' sgn x)/A
  Field zeta_B, phi_B;
  Field log_bracket_B;
  Field chi_B;
  Field psi_B, psi_B_d1;
  Field rho;
};

WeightFamily make_weights(double A, double B, double gamma, const Grid& grid);
// A = 1/delta, B = delta^{-1/4}.
WeightFamily weights_for_delta(double delta, double gamma, const Grid& grid);

double zeta(double x, double scale);
double log_zeta_d1(double x, double scale);
double log_zeta_d2(double x, double scale);

// (1 - gamma d^2)^{-1} f with the mirror node at 0 and Dirichlet at x_max.
Field smoothing_inverse(const Field& f, double gamma, const Grid& grid);
Field smoothing_forward(const Field& g, double gamma, const Grid& grid);

struct TransformedState {
  Field w, v1, v2, z;
};

TransformedState transformed_state(const ModalState& modal, const WeightFamily& weights, const SpectralData& spec);

// [int (f')^2 + rho f^2]^{1/2}
double local_norm(const Field& f, const Grid& grid);
// H1(I) x L2(I) size of a state deviation on I = [-half_width, half_width].
double loc_pair_norm(const FieldPair& deviation, const Grid& grid, double half_width);

}  // namespace kglab
