#include "profinite/symplectic.hpp"

#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "profinite/errors.hpp"

namespace profinite {

BilinearFamily bilinear_of(const TameForm& omega) {
  if (omega.degree() != 2) throw DimensionMismatch("bilinear data needs a 2-form");
  TameForm w = omega;
  return {omega.family(), [w](const Index& j, const Vector& x) { return w.level(j)(x).as_matrix(); }};
}

BilinearFamily bilinear_of(const CompatibleMetric& g) { return {g.family, g.gram}; }

RankReport is_projectively_nondegenerate(const BilinearFamily& b, std::span<const Index> levels, int samples,
                                         std::uint64_t seed) {
  RankReport out;
  std::mt19937_64 rng(seed);
  for (const auto& j : levels) {
    const int n = b.family->dim(j);
    int rank = n;
    for (int s = 0; s < std::max(samples, 1); ++s) rank = std::min(rank, numerical_rank(b.matrix(j, random_point(n, rng))));
    out.levels.push_back({j, rank, n});
    if (rank < n) out.nondegenerate = false;
  }
  return out;
}

WeakWitness is_weakly_nondegenerate(const BilinearFamily& b, const Index& level, const Vector& u,
                                    std::span<const Index> search_levels, std::optional<Vector> base_point) {
  const auto& family = *b.family;
  if (u.size() != family.dim(level)) throw DimensionMismatch("vector does not live on the given level");
  if (u.size() == 0 || u.cwiseAbs().maxCoeff() == 0.0) throw ZeroVector("weak non-degeneracy needs u != 0");
  const Vector x = base_point ? *base_point : Vector::Zero(u.size());
  for (const auto& j : search_levels) {
    if (!family.poset().leq(level, j)) continue;
    auto inj = family.inj(level, j);
    const Vector lifted = inj.jacobian(x) * u;
    const Matrix m = b.matrix(j, inj(x));
    const double threshold = 1e-10 * std::max(1.0, m.size() ? m.cwiseAbs().maxCoeff() : 0.0);
    const Vector row = m.transpose() * lifted;  // row[b] = b_J(Di u, e_b)
    for (Eigen::Index k = 0; k < row.size(); ++k)
      if (std::abs(row[k]) > threshold) return {true, j, static_cast<int>(k), row[k]};
  }
  return {};
}

SymplecticStructure SymplecticStructure::certify(TameForm omega, std::span<const Index> levels, int samples,
                                                 double closed_tol, std::uint64_t seed) {
  SymplecticStructure s{omega, {}, {}, false, false};
  std::mt19937_64 rng(seed);
  TameForm d = exterior_derivative(omega);
  for (const auto& j : levels) {
    const int n = omega.family()->dim(j);
    auto dw = d.level(j);
    auto w = omega.level(j);
    int lo = n, hi = 0;
    for (int k = 0; k < std::max(samples, 1); ++k) {
      Vector x = random_point(n, rng);
      s.certificate.record("closedness", dw(x).max_abs(), closed_tol);
      const int r = numerical_rank(w(x).as_matrix());
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    s.certificate.record("constant_rank", hi - lo, 0.0);
    s.ranks.levels.push_back({j, lo, n});
    if (lo < n) s.ranks.nondegenerate = false;
  }
  s.presymplectic = s.certificate.passed();
  s.symplectic = s.presymplectic && s.ranks.nondegenerate;
  return s;
}

Vector hamiltonian_field(const TameForm& omega, const CylindricalFunction& h, const Index& level, const Vector& point) {
  const Matrix w = omega.level(level)(point).as_matrix();
  const int n = static_cast<int>(w.rows());
  if (numerical_rank(w) < n)
    throw SingularForm("level " + omega.family()->poset().label(level) + " form has rank " +
                       std::to_string(numerical_rank(w)) + " < " + std::to_string(n));
  const Vector grad = h.on_level(level).jacobian(point).row(0).transpose();
  return Eigen::PartialPivLU<Matrix>(w.transpose()).solve(grad);
}

double defining_identity_residual(const TameForm& omega, const CylindricalFunction& h, const Index& level,
                                  const Vector& point, const Vector& field) {
  const Matrix w = omega.level(level)(point).as_matrix();
  const Vector grad = h.on_level(level).jacobian(point).row(0).transpose();
  return max_abs_diff(Vector(w.transpose() * field), grad);
}

Report hamiltonian_compat_check(const TameForm& omega, const CylindricalFunction& h,
                                std::span<const std::pair<Index, Index>> pairs, int samples, double tol,
                                std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  const auto& family = *omega.family();
  for (const auto& [j, k] : pairs) {
    auto p = family.proj(j, k);
    for (int s = 0; s < samples; ++s) {
      Vector x = random_point(family.dim(k), rng);
      Vector xk = hamiltonian_field(omega, h, k, x);
      Vector xj = hamiltonian_field(omega, h, j, p(x));
      report.record("hamiltonian_transport", max_abs_diff(Vector(p.jacobian(x) * xk), xj), tol);
    }
  }
  return report;
}

namespace {

Matrix darboux(int n) {
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i + 1 < n; i += 2) {
    w(i, i + 1) = 1.0;
    w(i + 1, i) = -1.0;
  }
  return w;
}

}  // namespace

Trajectory flow(const TameForm& omega, const CylindricalFunction& h, const Index& level, const Vector& x0, double dt,
                int steps, FlowScheme scheme) {
  const int n = omega.family()->dim(level);
  if (x0.size() != n) throw DimensionMismatch("initial point does not live on the flow level");
  auto hl = h.on_level(level);
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(steps + 1);
  traj.states.push_back(x0);
  traj.energies.push_back(hl(x0)[0]);
  auto grad = [&](const Vector& x) -> Vector { return hl.jacobian(x).row(0).transpose(); };

  if (scheme == FlowScheme::Leapfrog) {
    const Matrix w = omega.level(level)(x0).as_matrix();
    if (numerical_rank(w) < n) throw SingularForm("flow level form is degenerate");
    if (max_abs_diff(w, darboux(n)) > 1e-12)
      throw std::invalid_argument("leapfrog needs Darboux coordinates (q0, p0, q1, p1, ...)");
    Vector x = x0;
    for (int s = 0; s < steps; ++s) {
      Vector g = grad(x);
      for (int i = 0; i < n; i += 2) x[i + 1] -= 0.5 * dt * g[i];
      g = grad(x);
      for (int i = 0; i < n; i += 2) x[i] += dt * g[i + 1];
      g = grad(x);
      for (int i = 0; i < n; i += 2) x[i + 1] -= 0.5 * dt * g[i];
      traj.states.push_back(x);
      traj.energies.push_back(hl(x)[0]);
    }
    return traj;
  }

  auto field = [&](const Vector& x) { return hamiltonian_field(omega, h, level, x); };
  Vector x = x0;
  for (int s = 0; s < steps; ++s) {
    Vector next = x + dt * field(x);
    bool converged = false;
    for (int it = 0; it < 50 && !converged; ++it) {
      const Vector mid = 0.5 * (x + next);
      const Vector residual = next - x - dt * field(mid);
      const Matrix jac = Matrix::Identity(n, n) - 0.5 * dt * profinite::fd_jacobian(field, mid, n);
      const Vector delta = Eigen::PartialPivLU<Matrix>(jac).solve(residual);
      next -= delta;
      const double scale = 1.0 + next.cwiseAbs().maxCoeff();
      converged = delta.cwiseAbs().maxCoeff() <= 1e-14 * scale || residual.cwiseAbs().maxCoeff() <= 1e-15 * scale;
    }
    if (!converged) throw NonconvergentSolve("implicit midpoint step " + std::to_string(s) + " did not converge");
    x = next;
    traj.states.push_back(x);
    traj.energies.push_back(hl(x)[0]);
  }
  return traj;
}

Matrix algebra_matrix(const ProfiniteGroupAction& act, const Index& level, const Vector& xi) {
  const auto gens = act.generators(level);
  if (static_cast<Eigen::Index>(gens.size()) != xi.size())
    throw DimensionMismatch("algebra element has " + std::to_string(xi.size()) + " coefficients, level has " +
                            std::to_string(gens.size()) + " generators");
  const int n = act.family->dim(level);
  Matrix a = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < gens.size(); ++i) a += xi[static_cast<Eigen::Index>(i)] * gens[i];
  return a;
}

Matrix group_matrix(const ProfiniteGroupAction& act, const Index& level, const Vector& xi) {
  const Matrix a = algebra_matrix(act, level, xi);
  if (a.size() == 0) return a;
  return a.exp();
}

namespace {

double invariance_residual(const TameForm& omega, const Index& level, const Matrix& g, const Vector& x) {
  const auto w = omega.level(level);
  return max_abs_diff(w(g * x).pullback(g), w(x));
}

Vector random_coefficients(std::size_t n, std::mt19937_64& rng) { return random_point(static_cast<int>(n), rng, 3.0); }

}  // namespace

Report check_action(const ProfiniteGroupAction& act, const TameForm& omega,
                    std::span<const std::pair<Index, Index>> pairs, std::span<const Index> levels, int elements,
                    double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  const auto& family = *act.family;
  for (const auto& [j, k] : pairs) {
    auto p = family.proj(j, k);
    auto i = family.inj(j, k);
    for (int e = 0; e < elements; ++e) {
      Vector xi_k = random_coefficients(act.generators(k).size(), rng);
      Vector xk = random_point(family.dim(k), rng);
      Vector xi_j = act.project_algebra(j, k, xi_k);
      report.record("action_commutes_with_projection",
                    max_abs_diff(p(group_matrix(act, k, xi_k) * xk), Vector(group_matrix(act, j, xi_j) * p(xk))), tol);
      Vector xi_l = random_coefficients(act.generators(j).size(), rng);
      Vector xj = random_point(family.dim(j), rng);
      report.record("action_commutes_with_injection",
                    max_abs_diff(i(group_matrix(act, j, xi_l) * xj),
                                 Vector(group_matrix(act, k, act.inject_algebra(j, k, xi_l)) * i(xj))),
                    tol);
    }
  }
  for (const auto& j : levels)
    for (int e = 0; e < elements; ++e) {
      Matrix g = group_matrix(act, j, random_coefficients(act.generators(j).size(), rng));
      report.record("symplectic_invariance", invariance_residual(omega, j, g, random_point(family.dim(j), rng)), tol);
    }
  return report;
}

Report momentum_verify(const TameForm& omega, const ProfiniteGroupAction& act, const MomentumMap& mu,
                       const Vector& xi, const Index& level, int samples, double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  const int n = act.family->dim(level);
  const Matrix g = group_matrix(act, level, xi);
  const double h = 1e-5;
  const Matrix forward = group_matrix(act, level, h * xi);
  const Matrix backward = group_matrix(act, level, -h * xi);
  const CylindricalFunction hamiltonian = mu.mu(level, xi);
  for (int s = 0; s < samples; ++s) {
    Vector x = random_point(n, rng);
    const double inv = invariance_residual(omega, level, g, x);
    if (inv > 1e-8) throw NonSymplecticAction("exp(xi) moves the form by " + std::to_string(inv));
    const Vector generator = (forward * x - backward * x) / (2.0 * h);
    report.record("momentum_residual", max_abs_diff(generator, hamiltonian_field(omega, hamiltonian, level, x)), tol);
  }
  return report;
}

double momentum_linearity_residual(const MomentumMap& mu, const Index& level, const Vector& xi, const Vector& eta,
                                   double a, double b, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto combined = mu.mu(level, a * xi + b * eta).on_level(level);
  auto fx = mu.mu(level, xi).on_level(level);
  auto fy = mu.mu(level, eta).on_level(level);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Vector x = random_point(combined.domain_dim(), rng);
    worst = std::max(worst, std::abs(combined(x)[0] - a * fx(x)[0] - b * fy(x)[0]));
  }
  return worst;
}

Matrix musical_endomorphism(const Matrix& gram, const Matrix& omega) {
  return Eigen::PartialPivLU<Matrix>(gram).solve(omega);
}

}  // namespace profinite
