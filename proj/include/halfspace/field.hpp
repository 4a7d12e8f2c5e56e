#pragma once

#include <functional>
#include <initializer_list>
#include <memory>
#include <string_view>

#include <Eigen/Dense>

#include "halfspace/errors.hpp"

namespace halfspace {

/// Dense coordinates in R^n. The last coordinate is the normal direction x_n.
using Point = Eigen::VectorXd;
using Vector = Eigen::VectorXd;

inline Point point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

/// Space dimension n >= 3, with the exponents the problem attaches to it.
class Dimension {
 public:
  explicit Dimension(int n);

  int value() const { return n_; }
  operator int() const { return n_; }

  /// (n - 2) / 2, the decay half-exponent of the bubble profile.
  double half_excess() const { return 0.5 * (n_ - 2); }
  /// (n + 2) / (n - 2): the exponent under which the bubble family solves the interior equation.
  double critical_interior_exponent() const { return double(n_ + 2) / (n_ - 2); }
  /// n / (n - 2): the trace-critical boundary exponent.
  double critical_boundary_exponent() const { return double(n_) / (n_ - 2); }
  /// 2n / (n - 2): an alternative interior exponent, under which the bubble family is not a solution.
  double printed_interior_exponent() const { return 2.0 * n_ / (n_ - 2); }

 private:
  int n_;
};

/// True iff x_n >= 0.
bool is_admissible(const Point& x);
/// Throws DomainError unless x has n coordinates and x_n >= 0.
void require_admissible(const Point& x, int n, std::string_view what);

enum class Provenance { closed_form, sampled_grid, transformed };

std::string_view to_string(Provenance p);

inline constexpr double kDefaultFdStep = 1e-4;

/// Interface behind ScalarField. Implementations must be immutable.
class FieldModel {
 public:
  virtual ~FieldModel() = default;
  virtual int dim() const = 0;
  virtual Provenance provenance() const = 0;
  virtual double value(const Point& x) const = 0;
  virtual Vector gradient(const Point& x) const = 0;
  virtual double laplacian(const Point& x) const = 0;
};

/// Shared immutable handle to a scalar field on the (closed) upper half-space.
///
/// Copies share the underlying model, so fields are cheap to pass by value and
/// safe to read concurrently.
class ScalarField {
 public:
  using ValueFn = std::function<double(const Point&)>;
  using GradientFn = std::function<Vector(const Point&)>;
  using LaplacianFn = std::function<double(const Point&)>;

  explicit ScalarField(std::shared_ptr<const FieldModel> model);

  /// Field with explicit derivative callbacks.
  static ScalarField from_functions(Dimension n, ValueFn value, GradientFn gradient,
                                    LaplacianFn laplacian,
                                    Provenance provenance = Provenance::closed_form);
  /// Field known only through its values; derivatives use the finite-difference
  /// operators below with step h.
  static ScalarField from_values(Dimension n, ValueFn value, Provenance provenance,
                                 double h = kDefaultFdStep);

  int dim() const { return model_->dim(); }
  Provenance provenance() const { return model_->provenance(); }
  double value(const Point& x) const { return model_->value(x); }
  double operator()(const Point& x) const { return model_->value(x); }
  Vector gradient(const Point& x) const { return model_->gradient(x); }
  double laplacian(const Point& x) const { return model_->laplacian(x); }

  const FieldModel& model() const { return *model_; }

 private:
  std::shared_ptr<const FieldModel> model_;
};

/// Central differences per coordinate. In x_n, switches to the one-sided
/// second-order stencil when x_n < h so no probe leaves the half-space.
Vector fd_gradient(const ScalarField& f, const Point& x, double h = kDefaultFdStep);

/// (2n+1)-point Laplacian with the same boundary treatment as fd_gradient.
double fd_laplacian(const ScalarField& f, const Point& x, double h = kDefaultFdStep);

/// Same stencils on a bare value callback; used where no ScalarField exists yet.
Vector fd_gradient(const ScalarField::ValueFn& f, const Point& x, double h);
double fd_laplacian(const ScalarField::ValueFn& f, const Point& x, double h);

}  // namespace halfspace
