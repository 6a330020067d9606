#pragma once

#include <functional>
#include <vector>

namespace kglab {

struct ModelParams {
  double alpha = 2.0;
  double domain_half_length = 40.0;
  int n_points = 4001;

  void validate() const;
  bool supercritical() const { return alpha > 1.0; }
};

// Uniform nodes x_i = i*h on [0, x_max]. Node 0 is the mirror node, the last
// node carries the homogeneous Dirichlet condition.
class Grid {
 public:
  Grid(double x_max, int n_points);
  explicit Grid(const ModelParams& p) : Grid(p.domain_half_length, p.n_points) {}

  int size() const { return n_; }
  double h() const { return h_; }
  double x_max() const { return x_max_; }
  double x(int i) const { return i * h_; }
  std::vector<double> nodes() const;

  // Full-line trapezoid weight of node i: h at x=0 and at x_max, 2h inside.
  double weight(int i) const { return (i == 0 || i == n_ - 1) ? h_ : 2.0 * h_; }

  bool can_coarsen() const { return (n_ - 1) % 2 == 0 && (n_ - 1) / 2 + 1 >= 16; }
  Grid coarsened() const;
  Grid refined() const;

 private:
  double x_max_;
  int n_;
  double h_;
};

enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }

struct Field {
  std::vector<double> values;
  Parity parity = Parity::even;

  Field() = default;
  explicit Field(int n, Parity p = Parity::even) : values(static_cast<size_t>(n), 0.0), parity(p) {}
  Field(std::vector<double> v, Parity p = Parity::even) : values(std::move(v)), parity(p) {}

  int size() const { return static_cast<int>(values.size()); }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  double* data() { return values.data(); }
  const double* data() const { return values.data(); }
};

struct FieldPair {
  Field phi1;
  Field phi2;
};

Field sample(const Grid& g, const std::function<double(double)>& fn, Parity p = Parity::even);

Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);
Field hadamard(const Field& a, const Field& b);
void axpy(double s, const Field& x, Field& y);
FieldPair operator+(const FieldPair& a, const FieldPair& b);
FieldPair operator-(const FieldPair& a, const FieldPair& b);
FieldPair operator*(double s, const FieldPair& a);

// Full-line integrals by the mirrored trapezoid rule. Products of opposite
// parity are odd and integrate to zero.
double integrate(const Grid& g, const std::vector<double>& even_integrand);
double inner(const Grid& g, const Field& a, const Field& b);
double inner(const Grid& g, const FieldPair& a, const FieldPair& b);
double l2_norm(const Grid& g, const Field& a);
double sup_norm(const Field& a);

// Centered first derivative; parity flips. Mirror ghost at x=0, one-sided at x_max.
Field d1(const Grid& g, const Field& f);
// Second derivative with mirror ghost at x=0 and zero Dirichlet ghost past x_max.
Field d2(const Grid& g, const Field& f);

// Full-line integral of (f')^2 from forward differences between nodes, with an
// optional weight evaluated at cell midpoints. Equals <f, -d2 f> for Dirichlet fields.
double grad_sq(const Grid& g, const Field& f);
double grad_sq(const Grid& g, const Field& f, const std::function<double(double)>& midpoint_weight);
double h1_norm(const Grid& g, const Field& f);
// ||(f1, f2)||_{H1 x L2}
double energy_norm(const Grid& g, const FieldPair& p);

}  // namespace kglab
