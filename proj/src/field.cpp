#include "halfspace/field.hpp"

#include <string>
#include <utility>

namespace halfspace {

Dimension::Dimension(int n) : n_(n) {
  if (n < 3) throw DomainError("dimension must satisfy n >= 3, got " + std::to_string(n));
}

bool is_admissible(const Point& x) { return x.size() > 0 && x[x.size() - 1] >= 0.0; }

void require_admissible(const Point& x, int n, std::string_view what) {
  if (x.size() != n) {
    throw DomainError(std::string(what) + ": point has " + std::to_string(x.size()) +
                      " coordinates, expected " + std::to_string(n));
  }
  if (!is_admissible(x)) {
    throw DomainError(std::string(what) + ": point lies below the boundary (x_n < 0)");
  }
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::closed_form: return "closed-form";
    case Provenance::sampled_grid: return "sampled-grid";
    case Provenance::transformed: return "transformed";
  }
  return "unknown";
}

namespace {

class FunctionModel final : public FieldModel {
 public:
  FunctionModel(int n, ScalarField::ValueFn v, ScalarField::GradientFn g,
                ScalarField::LaplacianFn l, Provenance p)
      : n_(n), value_(std::move(v)), gradient_(std::move(g)), laplacian_(std::move(l)),
        provenance_(p) {}

  int dim() const override { return n_; }
  Provenance provenance() const override { return provenance_; }
  double value(const Point& x) const override { return value_(x); }
  Vector gradient(const Point& x) const override { return gradient_(x); }
  double laplacian(const Point& x) const override { return laplacian_(x); }

 private:
  int n_;
  ScalarField::ValueFn value_;
  ScalarField::GradientFn gradient_;
  ScalarField::LaplacianFn laplacian_;
  Provenance provenance_;
};

}  // namespace

ScalarField::ScalarField(std::shared_ptr<const FieldModel> model) : model_(std::move(model)) {
  if (!model_) throw DomainError("ScalarField: null model");
}

ScalarField ScalarField::from_functions(Dimension n, ValueFn value, GradientFn gradient,
                                        LaplacianFn laplacian, Provenance provenance) {
  return ScalarField(std::make_shared<FunctionModel>(n.value(), std::move(value),
                                                     std::move(gradient), std::move(laplacian),
                                                     provenance));
}

ScalarField ScalarField::from_values(Dimension n, ValueFn value, Provenance provenance,
                                     double h) {
  auto grad = [value, h](const Point& x) { return fd_gradient(value, x, h); };
  auto lap = [value, h](const Point& x) { return fd_laplacian(value, x, h); };
  return from_functions(n, value, std::move(grad), std::move(lap), provenance);
}

Vector fd_gradient(const ScalarField::ValueFn& f, const Point& x, double h) {
  if (!(h > 0.0)) throw DomainError("fd_gradient: step must be positive");
  if (!is_admissible(x)) throw DomainError("fd_gradient: point lies below the boundary");
  const Eigen::Index n = x.size();
  Vector g(n);
  Point probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool one_sided = (i == n - 1) && x[i] < h;
    if (one_sided) {
      const double f0 = f(x);
      probe[i] = x[i] + h;
      const double f1 = f(probe);
      probe[i] = x[i] + 2.0 * h;
      const double f2 = f(probe);
      g[i] = (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
    } else {
      probe[i] = x[i] + h;
      const double fp = f(probe);
      probe[i] = x[i] - h;
      const double fm = f(probe);
      g[i] = (fp - fm) / (2.0 * h);
    }
    probe[i] = x[i];
  }
  return g;
}

double fd_laplacian(const ScalarField::ValueFn& f, const Point& x, double h) {
  if (!(h > 0.0)) throw DomainError("fd_laplacian: step must be positive");
  if (!is_admissible(x)) throw DomainError("fd_laplacian: point lies below the boundary");
  const Eigen::Index n = x.size();
  const double f0 = f(x);
  const double inv_h2 = 1.0 / (h * h);
  double sum = 0.0;
  Point probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool one_sided = (i == n - 1) && x[i] < h;
    if (one_sided) {
      // (2 f0 - 5 f1 + 4 f2 - f3) / h^2 is second-order for f''.
      double fk[4] = {f0, 0.0, 0.0, 0.0};
      for (int k = 1; k < 4; ++k) {
        probe[i] = x[i] + k * h;
        fk[k] = f(probe);
      }
      sum += (2.0 * fk[0] - 5.0 * fk[1] + 4.0 * fk[2] - fk[3]) * inv_h2;
    } else {
      probe[i] = x[i] + h;
      const double fp = f(probe);
      probe[i] = x[i] - h;
      const double fm = f(probe);
      sum += (fp - 2.0 * f0 + fm) * inv_h2;
    }
    probe[i] = x[i];
  }
  return sum;
}

Vector fd_gradient(const ScalarField& f, const Point& x, double h) {
  if (x.size() != f.dim()) throw DomainError("fd_gradient: dimension mismatch");
  return fd_gradient([&f](const Point& p) { return f.value(p); }, x, h);
}

double fd_laplacian(const ScalarField& f, const Point& x, double h) {
  if (x.size() != f.dim()) throw DomainError("fd_laplacian: dimension mismatch");
  return fd_laplacian([&f](const Point& p) { return f.value(p); }, x, h);
}

}  // namespace halfspace
