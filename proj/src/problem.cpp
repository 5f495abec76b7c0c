#include "ssopt/problem.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <utility>

#include "ssopt/sketch.hpp"

namespace ssopt {

Problem::Problem(std::string name, int dim, Vector x0, ObjectiveFn f,
                 GradientFn g, std::optional<double> lipschitz,
                 std::optional<double> gradient_bound)
    : name_(std::move(name)),
      dim_(dim),
      x0_(std::move(x0)),
      f_(std::move(f)),
      grad_(std::move(g)),
      lipschitz_(lipschitz),
      gradient_bound_(gradient_bound) {
  if (dim_ < 1) throw std::invalid_argument("problem dimension must be >= 1");
  if (x0_.size() != dim_)
    throw std::invalid_argument("start point size does not match dimension");
  if (lipschitz_ && *lipschitz_ <= 0.0)
    throw std::invalid_argument("Lipschitz constant must be positive");
  if (gradient_bound_ && *gradient_bound_ <= 0.0)
    throw std::invalid_argument("gradient bound must be positive");
}

void Problem::check_point(const Vector& x) const {
  if (x.size() != dim_)
    throw std::invalid_argument("point size does not match problem dimension");
  if (!x.allFinite())
    throw std::invalid_argument("point contains NaN or infinite entries");
}

double Problem::evaluate(const Vector& x) {
  check_point(x);
  const double v = f_(x);
  ++eval_count_;
  if (observer_) observer_(eval_count_, v);
  return v;
}

Vector Problem::sketched_gradient(const Vector& x, const Matrix& S) {
  check_point(x);
  if (S.rows() != dim_)
    throw std::invalid_argument("sketch row count does not match dimension");
  if (S.cols() < 1) throw std::invalid_argument("sketch must have >= 1 column");
  // One hidden gradient evaluation simulates a batch of forward-mode
  // directional derivatives; the charge is per direction.
  dirderiv_count_ += S.cols();
  return S.transpose() * grad_(x);
}

Vector Problem::gradient(const Vector& x) const {
  if (gradient_locks_ > 0)
    throw OracleViolation(
        "exact gradient requested while the solver oracle lock is held");
  check_point(x);
  return grad_(x);
}

void Problem::reset_counters() {
  eval_count_ = 0;
  dirderiv_count_ = 0;
}

Problem embed_low_effective_dim(const Problem& base, int ambient_dim,
                                std::uint64_t seed) {
  const int d = base.dim();
  if (ambient_dim < d)
    throw std::invalid_argument("ambient dimension must be >= base dimension");

  Rng rng(derive_seed(seed, 0xe3bedull));
  Matrix Q = haar_orthogonal(ambient_dim, ambient_dim, rng);
  // Row block that maps ambient points onto base coordinates.
  auto A = std::make_shared<Matrix>(Q.topRows(d));

  auto f = base.f_;
  auto g = base.grad_;
  Problem embedded(
      base.name() + "@D=" + std::to_string(ambient_dim) +
          ",seed=" + std::to_string(seed),
      ambient_dim, A->transpose() * base.start_point(),
      [A, f](const Vector& x) { return f(*A * x); },
      [A, g](const Vector& x) -> Vector { return A->transpose() * g(*A * x); },
      base.lipschitz(), base.gradient_bound());
  embedded.set_embedding(EmbeddingInfo{d, std::move(Q), seed});
  return embedded;
}

namespace {

Problem make_diag_quadratic(const std::string& name, int dim, double cond) {
  Vector lam(dim);
  for (int i = 0; i < dim; ++i)
    lam(i) = dim == 1 ? 1.0 : std::pow(cond, double(i) / double(dim - 1));
  Vector x0 = Vector::Ones(dim);
  const double f0 = 0.5 * (lam.array() * x0.array().square()).sum();
  return Problem(
      name, dim, x0,
      [lam](const Vector& x) {
        return 0.5 * (lam.array() * x.array().square()).sum();
      },
      [lam](const Vector& x) -> Vector { return lam.asDiagonal() * x; }, cond,
      std::sqrt(2.0 * cond * f0));
}

Problem make_rotated_quadratic(int dim) {
  const double cond = 1e3;
  Vector lam(dim);
  for (int i = 0; i < dim; ++i)
    lam(i) = dim == 1 ? 1.0 : std::pow(cond, double(i) / double(dim - 1));
  Rng rng(derive_seed(0xc0ffee, std::uint64_t(dim)));
  auto R = std::make_shared<Matrix>(haar_orthogonal(dim, dim, rng));
  Vector x0 = Vector::Ones(dim);
  auto value = [lam, R](const Vector& x) {
    Vector y = R->transpose() * x;
    return 0.5 * (lam.array() * y.array().square()).sum();
  };
  return Problem(
      "quad_rot", dim, x0, value,
      [lam, R](const Vector& x) -> Vector {
        Vector y = R->transpose() * x;
        return *R * (lam.asDiagonal() * y);
      },
      cond, std::sqrt(2.0 * cond * value(x0)));
}

Problem make_sphere(int dim) {
  Vector x0 = Vector::Ones(dim);
  return Problem(
      "sphere", dim, x0,
      [](const Vector& x) { return 0.5 * x.squaredNorm(); },
      [](const Vector& x) -> Vector { return x; }, 1.0, x0.norm());
}

Problem make_rosenbrock(int dim) {
  Vector x0(dim);
  for (int i = 0; i < dim; ++i) x0(i) = (i % 2 == 0) ? -1.2 : 1.0;
  return Problem(
      "rosenbrock", dim, x0,
      [](const Vector& x) {
        double s = 0.0;
        for (int i = 0; i + 1 < x.size(); ++i) {
          const double t = x(i + 1) - x(i) * x(i);
          const double u = 1.0 - x(i);
          s += 100.0 * t * t + u * u;
        }
        return s;
      },
      [](const Vector& x) -> Vector {
        Vector g = Vector::Zero(x.size());
        for (int i = 0; i + 1 < x.size(); ++i) {
          const double t = x(i + 1) - x(i) * x(i);
          g(i) += -400.0 * x(i) * t - 2.0 * (1.0 - x(i));
          g(i + 1) += 200.0 * t;
        }
        return g;
      });
}

Problem make_trigonometric(int dim) {
  auto residuals = [dim](const Vector& x) -> Vector {
    Vector f(dim);
    const double cos_sum = x.array().cos().sum();
    for (int i = 0; i < dim; ++i)
      f(i) = dim - cos_sum + (i + 1) * (1.0 - std::cos(x(i))) - std::sin(x(i));
    return f;
  };
  return Problem(
      "trigonometric", dim, Vector::Constant(dim, 1.0 / dim),
      [residuals](const Vector& x) { return residuals(x).squaredNorm(); },
      [residuals, dim](const Vector& x) -> Vector {
        const Vector f = residuals(x);
        const double total = f.sum();
        Vector g(dim);
        for (int j = 0; j < dim; ++j) {
          const double sj = std::sin(x(j));
          g(j) = 2.0 * (total * sj + f(j) * ((j + 1) * sj - std::cos(x(j))));
        }
        return g;
      });
}

Problem make_broyden_tridiagonal(int dim) {
  auto residuals = [dim](const Vector& x) -> Vector {
    Vector f(dim);
    for (int i = 0; i < dim; ++i) {
      const double xm = i > 0 ? x(i - 1) : 0.0;
      const double xp = i + 1 < dim ? x(i + 1) : 0.0;
      f(i) = (3.0 - 2.0 * x(i)) * x(i) - xm - 2.0 * xp + 1.0;
    }
    return f;
  };
  return Problem(
      "broyden_tridiagonal", dim, Vector::Constant(dim, -1.0),
      [residuals](const Vector& x) { return residuals(x).squaredNorm(); },
      [residuals, dim](const Vector& x) -> Vector {
        const Vector f = residuals(x);
        Vector g(dim);
        for (int j = 0; j < dim; ++j) {
          double s = f(j) * (3.0 - 4.0 * x(j));
          if (j + 1 < dim) s -= f(j + 1);        // x_j enters f_{j+1} as -x_j
          if (j > 0) s -= 2.0 * f(j - 1);        // and f_{j-1} as -2 x_j
          g(j) = 2.0 * s;
        }
        return g;
      });
}

double helical_theta(double x1, double x2) {
  if (x1 == 0.0) return x2 >= 0.0 ? 0.25 : -0.25;
  double t = std::atan(x2 / x1) / (2.0 * std::numbers::pi);
  if (x1 < 0.0) t += 0.5;
  return t;
}

Problem make_helical_valley() {
  Vector x0(3);
  x0 << -1.0, 0.0, 0.0;
  return Problem(
      "helical_valley", 3, x0,
      [](const Vector& x) {
        const double th = helical_theta(x(0), x(1));
        const double r = std::hypot(x(0), x(1));
        const double f1 = 10.0 * (x(2) - 10.0 * th);
        const double f2 = 10.0 * (r - 1.0);
        return f1 * f1 + f2 * f2 + x(2) * x(2);
      },
      [](const Vector& x) -> Vector {
        const double th = helical_theta(x(0), x(1));
        const double r2 = x(0) * x(0) + x(1) * x(1);
        const double r = std::sqrt(r2);
        const double f1 = 10.0 * (x(2) - 10.0 * th);
        const double f2 = 10.0 * (r - 1.0);
        const double two_pi = 2.0 * std::numbers::pi;
        Vector g(3);
        g(0) = 2.0 * f1 * (-100.0) * (-x(1) / (two_pi * r2)) +
               2.0 * f2 * 10.0 * x(0) / r;
        g(1) = 2.0 * f1 * (-100.0) * (x(0) / (two_pi * r2)) +
               2.0 * f2 * 10.0 * x(1) / r;
        g(2) = 2.0 * f1 * 10.0 + 2.0 * x(2);
        return g;
      });
}

Problem make_powell_singular() {
  Vector x0(4);
  x0 << 3.0, -1.0, 0.0, 1.0;
  const double s5 = std::sqrt(5.0), s10 = std::sqrt(10.0);
  return Problem(
      "powell_singular", 4, x0,
      [s5, s10](const Vector& x) {
        const double f1 = x(0) + 10.0 * x(1);
        const double f2 = s5 * (x(2) - x(3));
        const double f3 = (x(1) - 2.0 * x(2)) * (x(1) - 2.0 * x(2));
        const double f4 = s10 * (x(0) - x(3)) * (x(0) - x(3));
        return f1 * f1 + f2 * f2 + f3 * f3 + f4 * f4;
      },
      [s5, s10](const Vector& x) -> Vector {
        const double f1 = x(0) + 10.0 * x(1);
        const double f2 = s5 * (x(2) - x(3));
        const double a = x(1) - 2.0 * x(2);
        const double b = x(0) - x(3);
        const double f3 = a * a;
        const double f4 = s10 * b * b;
        Vector g(4);
        g(0) = 2.0 * f1 + 2.0 * f4 * s10 * 2.0 * b;
        g(1) = 20.0 * f1 + 2.0 * f3 * 2.0 * a;
        g(2) = 2.0 * f2 * s5 - 2.0 * f3 * 4.0 * a;
        g(3) = -2.0 * f2 * s5 - 2.0 * f4 * s10 * 2.0 * b;
        return g;
      });
}

Problem make_wood() {
  Vector x0(4);
  x0 << -3.0, -1.0, -3.0, -1.0;
  return Problem(
      "wood", 4, x0,
      [](const Vector& x) {
        const double a = x(1) - x(0) * x(0);
        const double b = x(3) - x(2) * x(2);
        return 100.0 * a * a + (1.0 - x(0)) * (1.0 - x(0)) + 90.0 * b * b +
               (1.0 - x(2)) * (1.0 - x(2)) +
               10.0 * (x(1) + x(3) - 2.0) * (x(1) + x(3) - 2.0) +
               0.1 * (x(1) - x(3)) * (x(1) - x(3));
      },
      [](const Vector& x) -> Vector {
        const double a = x(1) - x(0) * x(0);
        const double b = x(3) - x(2) * x(2);
        const double c = x(1) + x(3) - 2.0;
        const double e = x(1) - x(3);
        Vector g(4);
        g(0) = -400.0 * x(0) * a - 2.0 * (1.0 - x(0));
        g(1) = 200.0 * a + 20.0 * c + 0.2 * e;
        g(2) = -360.0 * x(2) * b - 2.0 * (1.0 - x(2));
        g(3) = 180.0 * b + 20.0 * c - 0.2 * e;
        return g;
      });
}

Problem make_linear_slope(int dim) {
  Vector c = Vector::Constant(dim, 1.0 / std::sqrt(double(dim)));
  return Problem(
      "linear_slope", dim, Vector::Zero(dim),
      [c](const Vector& x) { return c.dot(x); },
      [c](const Vector&) -> Vector { return c; }, std::nullopt, 1.0);
}

struct RegistryEntry {
  int default_dim;
  int fixed_dim;  // 0 if the dimension is free
  std::function<Problem(int)> factory;
};

const std::map<std::string, RegistryEntry>& registry() {
  static const std::map<std::string, RegistryEntry> reg = {
      {"sphere", {10, 0, make_sphere}},
      {"quad_cond10",
       {10, 0, [](int d) { return make_diag_quadratic("quad_cond10", d, 1e1); }}},
      {"quad_cond100",
       {10, 0,
        [](int d) { return make_diag_quadratic("quad_cond100", d, 1e2); }}},
      {"quad_ill",
       {10, 0, [](int d) { return make_diag_quadratic("quad_ill", d, 1e4); }}},
      {"quad_rot", {10, 0, make_rotated_quadratic}},
      {"rosenbrock", {2, 0, make_rosenbrock}},
      {"trigonometric", {10, 0, make_trigonometric}},
      {"broyden_tridiagonal", {10, 0, make_broyden_tridiagonal}},
      {"helical_valley", {3, 3, [](int) { return make_helical_valley(); }}},
      {"powell_singular", {4, 4, [](int) { return make_powell_singular(); }}},
      {"wood", {4, 4, [](int) { return make_wood(); }}},
      {"linear_slope", {10, 0, make_linear_slope}},
  };
  return reg;
}

}  // namespace

std::vector<std::string> builtin_problem_names() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : registry()) names.push_back(name);
  return names;
}

Problem make_problem(const std::string& name, int dim) {
  auto it = registry().find(name);
  if (it == registry().end())
    throw std::invalid_argument("unknown problem: " + name);
  const RegistryEntry& e = it->second;
  int d = dim == 0 ? e.default_dim : dim;
  if (e.fixed_dim != 0 && d != e.fixed_dim)
    throw std::invalid_argument(name + " has fixed dimension " +
                                std::to_string(e.fixed_dim));
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (name == "rosenbrock" && d < 2)
    throw std::invalid_argument("rosenbrock needs dimension >= 2");
  return e.factory(d);
}

Problem make_problem_from_id(const std::string& id) {
  std::string base = id;
  int ambient = 0;
  std::uint64_t seed = 0;
  bool embedded = false;
  if (auto at = id.find('@'); at != std::string::npos) {
    base = id.substr(0, at);
    const std::string tail = id.substr(at + 1);
    if (tail.rfind("D=", 0) != 0)
      throw std::invalid_argument("bad embedded problem id: " + id);
    const auto comma = tail.find(",seed=");
    if (comma == std::string::npos)
      throw std::invalid_argument("bad embedded problem id: " + id);
    ambient = std::stoi(tail.substr(2, comma - 2));
    seed = std::stoull(tail.substr(comma + 6));
    embedded = true;
  }
  int dim = 0;
  if (auto colon = base.find(':'); colon != std::string::npos) {
    dim = std::stoi(base.substr(colon + 1));
    base = base.substr(0, colon);
  }
  Problem p = make_problem(base, dim);
  if (!embedded) return p;
  return embed_low_effective_dim(p, ambient, seed);
}

}  // namespace ssopt
