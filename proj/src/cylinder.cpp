#include "profinite/cylinder.hpp"

#include <cmath>

#include "profinite/errors.hpp"

namespace profinite {

namespace {

int section_dim(const ProfiniteFamily& family, const Section& s) {
  int d = 0;
  for (const auto& m : s.members()) d += family.dim(m);
  return d;
}

// Stack maps g_i : R^n -> R^{m_i} into R^n -> R^{Σ m_i}.
DifferentiableMap stack(int n, std::vector<DifferentiableMap> parts) {
  int m = 0;
  bool linear = true;
  for (const auto& p : parts) {
    if (p.domain_dim() != n) throw DimensionMismatch("stacked maps disagree on the domain");
    m += p.codomain_dim();
    linear = linear && p.matrix().has_value();
  }
  if (linear) {
    Matrix out(m, n);
    int row = 0;
    for (const auto& p : parts) {
      out.middleRows(row, p.codomain_dim()) = *p.matrix();
      row += p.codomain_dim();
    }
    return DifferentiableMap::linear(std::move(out));
  }
  return DifferentiableMap(
      n, m,
      [parts, m](const Vector& x) {
        Vector y(m);
        int row = 0;
        for (const auto& p : parts) {
          y.segment(row, p.codomain_dim()) = p(x);
          row += p.codomain_dim();
        }
        return y;
      },
      [parts, m, n](const Vector& x) {
        Matrix jac(m, n);
        int row = 0;
        for (const auto& p : parts) {
          jac.middleRows(row, p.codomain_dim()) = p.jacobian(x);
          row += p.codomain_dim();
        }
        return jac;
      });
}

// Restrict R^total to the block [offset, offset + len).
DifferentiableMap block_selector(int total, int offset, int len) {
  Matrix sel = Matrix::Zero(len, total);
  sel.middleCols(offset, len) = Matrix::Identity(len, len);
  return DifferentiableMap::linear(std::move(sel));
}

}  // namespace

CylindricalFunction::CylindricalFunction(FamilyPtr family, Section section, DifferentiableMap base)
    : family_(std::move(family)), section_(std::move(section)), base_(std::move(base)) {
  if (!section_.is_finite() || section_.empty())
    throw EmptySection("a cylindrical function needs a finite nonempty section");
  if (base_.domain_dim() != profinite::section_dim(*family_, section_) || base_.codomain_dim() != 1)
    throw DimensionMismatch("base map must send the section's coordinates to R");
}

CylindricalFunction CylindricalFunction::constant(FamilyPtr family, Section section, double c) {
  const int n = profinite::section_dim(*family, section);
  Matrix zero = Matrix::Zero(1, n);
  DifferentiableMap base(
      n, 1, [c](const Vector&) { return Vector::Constant(1, c); }, [zero](const Vector&) { return zero; });
  return CylindricalFunction(std::move(family), std::move(section), std::move(base));
}

CylindricalFunction CylindricalFunction::coordinate(FamilyPtr family, const Index& level, int coord) {
  const int n = family->dim(level);
  if (coord < 0 || coord >= n) throw DimensionMismatch("coordinate outside level " + level.to_string());
  Matrix row = Matrix::Zero(1, n);
  row(0, coord) = 1.0;
  return CylindricalFunction(std::move(family), Section{level}, DifferentiableMap::linear(std::move(row)));
}

Vector CylindricalFunction::gather(const Thread& t) const {
  Vector y(section_dim());
  int off = 0;
  for (const auto& m : section_.members()) {
    Vector v = t(m);
    y.segment(off, v.size()) = v;
    off += static_cast<int>(v.size());
  }
  return y;
}

Vector CylindricalFunction::gather(const SectionPoint& p) const {
  Vector y(section_dim());
  int off = 0;
  for (const auto& m : section_.members()) {
    const Vector& v = p.values.at(m);
    if (v.size() != family_->dim(m)) throw DimensionMismatch("section point value of the wrong size");
    y.segment(off, v.size()) = v;
    off += static_cast<int>(v.size());
  }
  return y;
}

CylindricalFunction CylindricalFunction::refine(const Section& finer) const {
  const auto& poset = family_->poset();
  const int total = profinite::section_dim(*family_, finer);
  // Offsets of the finer members inside the concatenated coordinates.
  std::map<Index, int> offset;
  int off = 0;
  for (const auto& t : finer.members()) {
    offset[t] = off;
    off += family_->dim(t);
  }
  std::vector<DifferentiableMap> parts;
  for (const auto& s : section_.members()) {
    const Index* above = nullptr;
    for (const auto& t : finer.members())
      if (poset.leq(s, t)) {
        above = &t;
        break;
      }
    if (!above)
      throw std::invalid_argument("refine: member " + poset.label(s) + " lies below no member of " +
                                  finer.to_string());
    parts.push_back(compose(family_->proj(s, *above), block_selector(total, offset[*above], family_->dim(*above))));
  }
  return CylindricalFunction(family_, finer, compose(base_, stack(total, std::move(parts))));
}

DifferentiableMap CylindricalFunction::on_level(const Index& j) const {
  const auto& poset = family_->poset();
  std::vector<DifferentiableMap> parts;
  for (const auto& s : section_.members()) {
    if (poset.leq(s, j))
      parts.push_back(family_->proj(s, j));
    else if (poset.leq(j, s))
      parts.push_back(family_->inj(j, s));
    else
      throw Incomparable(poset.label(j) + " vs member " + poset.label(s));
  }
  return compose(base_, stack(family_->dim(j), std::move(parts)));
}

double eval(const CylindricalFunction& f, const Thread& t) {
  if (f.family() != t.family()) throw FamilyMismatch(f.family()->name() + " vs " + t.family()->name());
  return f.base()(f.gather(t))[0];
}

SectionPoint representative(const CylindricalFunction& f, const Thread& t) {
  if (f.family() != t.family()) throw FamilyMismatch(f.family()->name() + " vs " + t.family()->name());
  return restrict_to(t, f.section());
}

std::optional<CylindricalFunction> separate(const Thread& x, const Thread& y, std::span<const Index> witness_levels) {
  if (x.family() != y.family()) throw FamilyMismatch(x.family()->name() + " vs " + y.family()->name());
  for (const auto& j : witness_levels) {
    Vector d = (x(j) - y(j)).cwiseAbs();
    if (d.size() == 0) continue;
    Eigen::Index c = 0;
    if (d.maxCoeff(&c) > 0.0) return CylindricalFunction::coordinate(x.family(), j, static_cast<int>(c));
  }
  return std::nullopt;
}

Vector differential(const CylindricalFunction& f, const Thread& t) {
  if (f.family() != t.family()) throw FamilyMismatch(f.family()->name() + " vs " + t.family()->name());
  return f.base().jacobian(f.gather(t)).row(0).transpose();
}

// -------------------------------------------------------------- CylPolynomial

CylPolynomial CylPolynomial::constant(double c) {
  CylPolynomial p;
  p.terms_.push_back({c, {}});
  return p;
}

CylPolynomial CylPolynomial::of(const CylindricalFunction& f) {
  CylPolynomial p;
  p.terms_.push_back({1.0, {f}});
  return p;
}

CylPolynomial CylPolynomial::univariate(std::span<const double> coeffs, const CylindricalFunction& f) {
  CylPolynomial p;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    p.terms_.push_back({coeffs[k], std::vector<CylindricalFunction>(k, f)});
  }
  return p;
}

double CylPolynomial::evaluate(const Thread& t) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    double prod = term.coeff;
    for (const auto& f : term.factors) prod *= eval(f, t);
    sum += prod;
  }
  return sum;
}

CylindricalFunction CylPolynomial::to_cylindrical(const FamilyPtr& family) const {
  const auto& poset = family->poset();
  std::optional<Index> top;
  for (const auto& term : terms_)
    for (const auto& f : term.factors) {
      if (f.family() != family) throw FamilyMismatch("factor from another family");
      for (const auto& m : f.section().members()) {
        if (!top) {
          top = m;
          continue;
        }
        auto j = poset.join(*top, m);
        if (!j) throw JoinFailure(poset.label(*top) + " and " + poset.label(m));
        top = *j;
      }
    }
  if (!top) {
    auto all = poset.elements();
    if (!all || all->empty()) throw JoinFailure("constant polynomial needs a level to live on");
    top = all->front();
  }
  const Section target{*top};
  std::vector<std::pair<double, std::vector<DifferentiableMap>>> parts;
  for (const auto& term : terms_) {
    std::vector<DifferentiableMap> fs;
    for (const auto& f : term.factors) fs.push_back(f.refine(target).base());
    parts.emplace_back(term.coeff, std::move(fs));
  }
  const int n = family->dim(*top);
  auto value = [parts](const Vector& y) {
    double sum = 0.0;
    for (const auto& [c, fs] : parts) {
      double prod = c;
      for (const auto& f : fs) prod *= f(y)[0];
      sum += prod;
    }
    return Vector::Constant(1, sum);
  };
  auto grad = [parts, n](const Vector& y) {
    Matrix g = Matrix::Zero(1, n);
    for (const auto& [c, fs] : parts) {
      std::vector<double> vals;
      for (const auto& f : fs) vals.push_back(f(y)[0]);
      for (std::size_t i = 0; i < fs.size(); ++i) {
        double others = c;
        for (std::size_t k = 0; k < fs.size(); ++k)
          if (k != i) others *= vals[k];
        g += others * fs[i].jacobian(y);
      }
    }
    return g;
  };
  return CylindricalFunction(family, target, DifferentiableMap(n, 1, value, grad));
}

CylPolynomial& CylPolynomial::operator+=(const CylPolynomial& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  return *this;
}

CylPolynomial operator*(const CylPolynomial& a, const CylPolynomial& b) {
  CylPolynomial out;
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      CylPolynomial::Term t{ta.coeff * tb.coeff, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.terms_.push_back(std::move(t));
    }
  return out;
}

CylPolynomial operator*(double s, CylPolynomial a) {
  for (auto& t : a.terms_) t.coeff *= s;
  return a;
}

}  // namespace profinite
