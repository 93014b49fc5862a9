#include "profinite/family.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "profinite/errors.hpp"

namespace profinite {

ProfiniteFamily::ProfiniteFamily(std::string name, PosetPtr poset, DimFn dim, MapFn proj, MapFn inj)
    : name_(std::move(name)), poset_(std::move(poset)), dim_(std::move(dim)), proj_(std::move(proj)),
      inj_(std::move(inj)) {}

int ProfiniteFamily::dim(const Index& j) const {
  int d = dim_(j);
  if (d < 0) throw DimensionMismatch("negative level dimension at " + poset_->label(j));
  return d;
}

DifferentiableMap ProfiniteFamily::cached(std::map<std::pair<Index, Index>, DifferentiableMap>& cache,
                                          const MapFn& fn, const Index& lower, const Index& upper) const {
  if (!poset_->leq(lower, upper))
    throw NotComparable(poset_->label(lower) + " is not below " + poset_->label(upper));
  auto key = std::make_pair(lower, upper);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  DifferentiableMap m = fn(lower, upper);
  std::lock_guard lock(mutex_);
  return cache.emplace(key, std::move(m)).first->second;
}

DifferentiableMap ProfiniteFamily::proj(const Index& lower, const Index& upper) const {
  return cached(proj_cache_, proj_, lower, upper);
}

DifferentiableMap ProfiniteFamily::inj(const Index& lower, const Index& upper) const {
  return cached(inj_cache_, inj_, lower, upper);
}

namespace {

using StoredMaps = std::map<std::pair<Index, Index>, DifferentiableMap>;

// Shortest ascending path lower = c0 < c1 < ... < cm = upper through stored pairs.
std::vector<Index> stored_path(const StoredMaps& maps, const Index& lower, const Index& upper) {
  std::map<Index, Index> parent;
  std::deque<Index> queue{lower};
  std::set<Index> seen{lower};
  while (!queue.empty()) {
    Index cur = queue.front();
    queue.pop_front();
    if (cur == upper) break;
    for (const auto& [key, map] : maps) {
      if (key.first != cur || seen.count(key.second)) continue;
      seen.insert(key.second);
      parent.emplace(key.second, cur);
      queue.push_back(key.second);
    }
  }
  if (!seen.count(upper)) return {};
  std::vector<Index> path{upper};
  while (path.back() != lower) path.push_back(parent.at(path.back()));
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

FamilyPtr ProfiniteFamily::from_stored_maps(std::string name, PosetPtr poset, std::map<Index, int> dims,
                                            StoredMaps projections, StoredMaps injections) {
  auto dims_ptr = std::make_shared<const std::map<Index, int>>(std::move(dims));
  auto projs = std::make_shared<const StoredMaps>(std::move(projections));
  auto injs = std::make_shared<const StoredMaps>(std::move(injections));
  auto dim_fn = [dims_ptr](const Index& j) {
    auto it = dims_ptr->find(j);
    if (it == dims_ptr->end()) throw DimensionMismatch("no level declared at " + j.to_string());
    return it->second;
  };
  auto proj_fn = [projs, dim_fn](const Index& lower, const Index& upper) -> DifferentiableMap {
    if (auto it = projs->find({lower, upper}); it != projs->end()) return it->second;
    if (lower == upper) return DifferentiableMap::identity(dim_fn(lower));
    auto path = stored_path(*projs, lower, upper);
    if (path.empty())
      throw std::invalid_argument("no stored projection chain from " + upper.to_string() + " to " +
                                  lower.to_string());
    DifferentiableMap acc = projs->at({path[path.size() - 2], path.back()});
    for (std::size_t i = path.size() - 2; i-- > 0;) acc = compose(projs->at({path[i], path[i + 1]}), acc);
    return acc;
  };
  auto inj_fn = [injs, dim_fn](const Index& lower, const Index& upper) -> DifferentiableMap {
    if (auto it = injs->find({lower, upper}); it != injs->end()) return it->second;
    if (lower == upper) return DifferentiableMap::identity(dim_fn(lower));
    auto path = stored_path(*injs, lower, upper);
    if (path.empty())
      throw std::invalid_argument("no stored injection chain from " + lower.to_string() + " to " +
                                  upper.to_string());
    DifferentiableMap acc = injs->at({path[0], path[1]});
    for (std::size_t i = 1; i + 1 < path.size(); ++i) acc = compose(injs->at({path[i], path[i + 1]}), acc);
    return acc;
  };
  return std::make_shared<const ProfiniteFamily>(std::move(name), std::move(poset), dim_fn, proj_fn, inj_fn);
}

Vector random_point(int dim, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector x(dim);
  for (int i = 0; i < dim; ++i) x[i] = u(rng);
  return x;
}

std::vector<std::vector<Index>> sample_chains(const IndexPoset& poset, std::span<const Index> indices,
                                              std::size_t max_chains, std::uint64_t seed) {
  std::vector<std::vector<Index>> triples, pairs;
  for (const auto& a : indices)
    for (const auto& b : indices) {
      if (!poset.lt(a, b)) continue;
      pairs.push_back({a, b});
      for (const auto& c : indices)
        if (poset.lt(b, c)) triples.push_back({a, b, c});
    }
  auto& pool = triples.empty() ? pairs : triples;
  if (pool.size() <= max_chains) return pool;
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(max_chains);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

void expect_dims(const DifferentiableMap& m, int in, int out, const std::string& what) {
  if (m.domain_dim() != in || m.codomain_dim() != out)
    throw DimensionMismatch(what + " declared R^" + std::to_string(m.domain_dim()) + " -> R^" +
                            std::to_string(m.codomain_dim()) + ", levels are R^" + std::to_string(in) +
                            " -> R^" + std::to_string(out));
}

DifferentiableMap checked_proj(const ProfiniteFamily& f, const Index& j, const Index& k) {
  auto m = f.proj(j, k);
  expect_dims(m, f.dim(k), f.dim(j), "proj(" + f.poset().label(j) + "," + f.poset().label(k) + ")");
  return m;
}

DifferentiableMap checked_inj(const ProfiniteFamily& f, const Index& j, const Index& k) {
  auto m = f.inj(j, k);
  expect_dims(m, f.dim(j), f.dim(k), "inj(" + f.poset().label(j) + "," + f.poset().label(k) + ")");
  return m;
}

void expect_ascending(const IndexPoset& poset, const std::vector<Index>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!poset.leq(chain[i], chain[i + 1]))
      throw NotComparable("chain is not ascending at " + poset.label(chain[i]));
}

}  // namespace

Report verify_family(const ProfiniteFamily& family, std::span<const std::vector<Index>> chains,
                     int points_per_chain, double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  for (const auto& chain : chains) {
    expect_ascending(family.poset(), chain);
    for (const auto& j : chain) {
      auto id = checked_proj(family, j, j);
      auto id_inj = checked_inj(family, j, j);
      for (int s = 0; s < points_per_chain; ++s) {
        Vector x = random_point(family.dim(j), rng);
        report.record("identity", std::max(max_abs_diff(id(x), x), max_abs_diff(id_inj(x), x)), tol);
      }
    }
    for (std::size_t a = 0; a < chain.size(); ++a)
      for (std::size_t b = a + 1; b < chain.size(); ++b) {
        auto p = checked_proj(family, chain[a], chain[b]);
        auto i = checked_inj(family, chain[a], chain[b]);
        for (int s = 0; s < points_per_chain; ++s) {
          Vector x = random_point(family.dim(chain[a]), rng);
          report.record("retraction", max_abs_diff(p(i(x)), x), tol);
        }
      }
    if (chain.size() >= 3) {
      for (std::size_t a = 0; a + 2 < chain.size(); ++a) {
        const auto &j = chain[a], &k = chain[a + 1], &l = chain[a + 2];
        auto pjl = checked_proj(family, j, l), pjk = checked_proj(family, j, k), pkl = checked_proj(family, k, l);
        auto ijl = checked_inj(family, j, l), ijk = checked_inj(family, j, k), ikl = checked_inj(family, k, l);
        for (int s = 0; s < points_per_chain; ++s) {
          Vector x = random_point(family.dim(l), rng);
          report.record("consistency", max_abs_diff(pjl(x), pjk(pkl(x))), tol);
          Vector y = random_point(family.dim(j), rng);
          report.record("injection_cocycle", max_abs_diff(ikl(ijk(y)), ijl(y)), tol);
        }
      }
    }
  }
  return report;
}

Report check_jacobians(const ProfiniteFamily& family, std::span<const std::vector<Index>> chains,
                       int points_per_chain, double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  for (const auto& chain : chains) {
    expect_ascending(family.poset(), chain);
    for (std::size_t a = 0; a < chain.size(); ++a)
      for (std::size_t b = a + 1; b < chain.size(); ++b) {
        auto p = family.proj(chain[a], chain[b]);
        auto i = family.inj(chain[a], chain[b]);
        for (int s = 0; s < points_per_chain; ++s) {
          report.record("jacobian_fd", jacobian_relative_error(p, random_point(p.domain_dim(), rng)), tol);
          report.record("jacobian_fd", jacobian_relative_error(i, random_point(i.domain_dim(), rng)), tol);
        }
      }
  }
  return report;
}

DifferentiableMap tangent_map(const DifferentiableMap& f) {
  const int n = f.domain_dim(), m = f.codomain_dim();
  if (f.matrix()) return direct_sum(f, f);
  return DifferentiableMap(2 * n, 2 * m, [f, n, m](const Vector& xv) -> Vector {
    Vector out(2 * m);
    out << f(xv.head(n)), f.jacobian(xv.head(n)) * xv.tail(n);
    return out;
  });
}

FamilyPtr tangent_family(const FamilyPtr& family) {
  FamilyPtr base = family;
  return std::make_shared<const ProfiniteFamily>(
      "T(" + family->name() + ")", family->poset_ptr(), [base](const Index& j) { return 2 * base->dim(j); },
      [base](const Index& j, const Index& k) { return tangent_map(base->proj(j, k)); },
      [base](const Index& j, const Index& k) { return tangent_map(base->inj(j, k)); });
}

FamilyPtr product_family(const FamilyPtr& m, const FamilyPtr& f) {
  if (m->poset_ptr() != f->poset_ptr()) throw FamilyMismatch("product of families over different posets");
  return std::make_shared<const ProfiniteFamily>(
      m->name() + "x" + f->name(), m->poset_ptr(), [m, f](const Index& j) { return m->dim(j) + f->dim(j); },
      [m, f](const Index& j, const Index& k) { return direct_sum(m->proj(j, k), f->proj(j, k)); },
      [m, f](const Index& j, const Index& k) { return direct_sum(m->inj(j, k), f->inj(j, k)); });
}

FamilyPtr constant_family(PosetPtr poset, int dim, std::string name) {
  return std::make_shared<const ProfiniteFamily>(
      std::move(name), std::move(poset), [dim](const Index&) { return dim; },
      [dim](const Index&, const Index&) { return DifferentiableMap::identity(dim); },
      [dim](const Index&, const Index&) { return DifferentiableMap::identity(dim); });
}

CotangentMaps cotangent_maps(const ProfiniteFamily& family, const Index& lower, const Index& upper,
                             const Vector& point_at_upper) {
  auto p = family.proj(lower, upper);
  auto i = family.inj(lower, upper);
  CotangentMaps out;
  out.push_up = p.jacobian(point_at_upper).transpose();
  out.push_down = i.jacobian(p(point_at_upper)).transpose();
  return out;
}

// -------------------------------------------------------------- ProfiniteMap

ProfiniteMap::ProfiniteMap(FamilyPtr source, FamilyPtr target, IndexMapFn index_map, LevelMapFn level_map)
    : source_(std::move(source)), target_(std::move(target)), index_map_(std::move(index_map)),
      level_map_(std::move(level_map)) {}

ProfiniteMap ProfiniteMap::identity(const FamilyPtr& family) {
  return ProfiniteMap(
      family, family, [](const Index& j) { return j; },
      [family](const Index& j) { return DifferentiableMap::identity(family->dim(j)); });
}

DifferentiableMap ProfiniteMap::level(const Index& j) const {
  auto m = level_map_(j);
  expect_dims(m, source_->dim(j), target_->dim(index_map_(j)), "level map at " + source_->poset().label(j));
  return m;
}

Report check_commuting_squares(const ProfiniteMap& f, std::span<const std::pair<Index, Index>> pairs,
                               int points_per_pair, double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  for (const auto& [j, k] : pairs) {
    const Index fj = f.index_map(j), fk = f.index_map(k);
    if (!f.target()->poset().leq(fj, fk)) {
      report.record_verdict("index_map_monotone", false);
      continue;
    }
    report.record_verdict("index_map_monotone", true);
    auto lhs = compose(f.target()->proj(fj, fk), f.level(k));
    auto rhs = compose(f.level(j), f.source()->proj(j, k));
    for (int s = 0; s < points_per_pair; ++s) {
      Vector x = random_point(f.source()->dim(k), rng);
      report.record("commuting_square", max_abs_diff(lhs(x), rhs(x)), tol);
    }
  }
  return report;
}

ProfiniteMap compose_profinite_maps(const ProfiniteMap& f, const ProfiniteMap& g) {
  if (g.target() != f.source())
    throw FamilyMismatch("cannot compose: " + g.target()->name() + " is not " + f.source()->name());
  return ProfiniteMap(
      g.source(), f.target(), [f, g](const Index& j) { return f.index_map(g.index_map(j)); },
      [f, g](const Index& j) { return compose(f.level(g.index_map(j)), g.level(j)); });
}

namespace {

bool is_identity_on(const ProfiniteMap& h, std::span<const Index> indices, int points, double tol,
                    std::mt19937_64& rng) {
  for (const auto& j : indices) {
    if (h.index_map(j) != j) return false;
    auto m = h.level(j);
    for (int s = 0; s < points; ++s) {
      Vector x = random_point(h.source()->dim(j), rng);
      if (!(max_abs_diff(m(x), x) <= tol)) return false;
    }
  }
  return true;
}

}  // namespace

bool is_profinite_diffeomorphism(const ProfiniteMap& f, const ProfiniteMap& g, std::span<const Index> indices,
                                 int points_per_level, double tol, std::uint64_t seed) {
  if (f.source() != g.target() || f.target() != g.source()) return false;
  std::mt19937_64 rng(seed);
  std::vector<Index> target_indices;
  for (const auto& j : indices) target_indices.push_back(f.index_map(j));
  return is_identity_on(compose_profinite_maps(g, f), indices, points_per_level, tol, rng) &&
         is_identity_on(compose_profinite_maps(f, g), target_indices, points_per_level, tol, rng);
}

Report verify_fibration(const FibrationData& data, std::span<const std::pair<Index, Index>> pairs,
                        int points_per_pair, double tol, std::uint64_t seed) {
  Report report;
  std::mt19937_64 rng(seed);
  auto checked_bundle = [&](const Index& j) {
    if (data.total->dim(j) != data.base->dim(j) + data.fiber->dim(j))
      throw DimensionMismatch("total level " + data.total->poset().label(j) + " is not base x fiber");
    auto b = data.bundle_proj(j);
    expect_dims(b, data.total->dim(j), data.base->dim(j), "bundle projection");
    return b;
  };
  for (const auto& [j, k] : pairs) {
    auto bj = checked_bundle(j), bk = checked_bundle(k);
    auto tp = data.total->proj(j, k), ti = data.total->inj(j, k);
    auto mp = data.base->proj(j, k), mi = data.base->inj(j, k);
    for (int s = 0; s < points_per_pair; ++s) {
      Vector x = random_point(data.total->dim(k), rng);
      report.record("bundle_proj_commutes_with_projection", max_abs_diff(bj(tp(x)), mp(bk(x))), tol);
      Vector y = random_point(data.total->dim(j), rng);
      report.record("bundle_proj_commutes_with_injection", max_abs_diff(bk(ti(y)), mi(bj(y))), tol);
    }
  }
  return report;
}

}  // namespace profinite
