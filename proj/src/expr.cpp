#include "profinite/expr.hpp"

#include <cctype>
#include <cmath>

#include "profinite/errors.hpp"

namespace profinite {

struct Expression::Node {
  enum class Kind { Number, Ref, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
  double number = 0.0;
  int ref = -1;
  std::string func;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

// Forward-mode value with gradient over the reference slots.
struct Dual {
  double v;
  Vector d;
};

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool has_refs(const NodePtr& n) {
  if (!n) return false;
  if (n->kind == Kind::Ref) return true;
  return has_refs(n->lhs) || has_refs(n->rhs);
}

class Parser {
 public:
  Parser(const std::string& text, const IndexPoset& poset, std::vector<CoordinateRef>& refs)
      : s_(text), poset_(poset), refs_(refs) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr n = term();
    while (true) {
      if (accept('+'))
        n = make(Kind::Add, n, term());
      else if (accept('-'))
        n = make(Kind::Sub, n, term());
      else
        return n;
    }
  }
  NodePtr term() {
    NodePtr n = power();
    while (true) {
      if (accept('*'))
        n = make(Kind::Mul, n, power());
      else if (accept('/'))
        n = make(Kind::Div, n, power());
      else
        return n;
    }
  }
  NodePtr power() {
    NodePtr base = unary();
    if (accept('^')) {
      NodePtr e = power();
      if (has_refs(e)) fail("exponents may not reference coordinates");
      return make(Kind::Pow, base, e);
    }
    return base;
  }
  NodePtr unary() {
    if (accept('-')) return make(Kind::Neg, unary());
    return primary();
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    if (accept('(')) {
      NodePtr n = expr();
      expect(')');
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      auto n = std::make_shared<Expression::Node>();
      n->kind = Kind::Number;
      n->number = v;
      return n;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    std::string word = s_.substr(start, pos_ - start);
    if (word == "level" && pos_ < s_.size() && s_[pos_] == ':') return coordinate();
    static const std::vector<std::string> funcs{"sin", "cos", "exp", "log", "sqrt", "sqr", "tanh"};
    if (std::find(funcs.begin(), funcs.end(), word) == funcs.end()) {
      pos_ = start;
      fail("unknown name '" + word + "'");
    }
    expect('(');
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Call;
    n->func = word;
    n->lhs = expr();
    expect(')');
    return n;
  }
  NodePtr coordinate() {
    ++pos_;  // ':'
    std::string idx_text;
    if (pos_ < s_.size() && s_[pos_] == '{') {
      std::size_t close = s_.find('}', pos_);
      if (close == std::string::npos) fail("unterminated index set");
      idx_text = s_.substr(pos_, close - pos_ + 1);
      pos_ = close + 1;
    } else {
      std::size_t start = pos_;
      while (pos_ < s_.size() && s_[pos_] != ':') ++pos_;
      idx_text = s_.substr(start, pos_ - start);
    }
    if (pos_ >= s_.size() || s_[pos_] != ':') fail("expected ':' before coordinate number");
    ++pos_;
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected coordinate number");
    const int coord = std::stoi(s_.substr(start, pos_ - start));
    Index level = resolve(idx_text);
    if (!poset_.contains(level)) fail("index " + idx_text + " is not in the poset");
    auto n = std::make_shared<Expression::Node>();
    n->kind = Kind::Ref;
    n->ref = static_cast<int>(refs_.size());
    refs_.push_back({level, coord});
    return n;
  }
  Index resolve(const std::string& text) {
    if (auto* fp = dynamic_cast<const FinitePoset*>(&poset_)) {
      if (auto named = fp->find(text)) return *named;
    }
    try {
      return parse_index(text);
    } catch (const ParseError&) {
      fail("cannot read index '" + text + "'");
    }
  }

  std::string s_;
  std::size_t pos_ = 0;
  const IndexPoset& poset_;
  std::vector<CoordinateRef>& refs_;
};

Dual run(const NodePtr& n, const Vector& refs) {
  const auto size = refs.size();
  switch (n->kind) {
    case Kind::Number: return {n->number, Vector::Zero(size)};
    case Kind::Ref: {
      Vector d = Vector::Zero(size);
      d[n->ref] = 1.0;
      return {refs[n->ref], d};
    }
    case Kind::Neg: {
      Dual a = run(n->lhs, refs);
      return {-a.v, -a.d};
    }
    case Kind::Add: {
      Dual a = run(n->lhs, refs), b = run(n->rhs, refs);
      return {a.v + b.v, a.d + b.d};
    }
    case Kind::Sub: {
      Dual a = run(n->lhs, refs), b = run(n->rhs, refs);
      return {a.v - b.v, a.d - b.d};
    }
    case Kind::Mul: {
      Dual a = run(n->lhs, refs), b = run(n->rhs, refs);
      return {a.v * b.v, b.v * a.d + a.v * b.d};
    }
    case Kind::Div: {
      Dual a = run(n->lhs, refs), b = run(n->rhs, refs);
      return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
    }
    case Kind::Pow: {
      Dual a = run(n->lhs, refs);
      const double e = run(n->rhs, refs).v;
      return {std::pow(a.v, e), e * std::pow(a.v, e - 1.0) * a.d};
    }
    case Kind::Call: {
      Dual a = run(n->lhs, refs);
      const std::string& f = n->func;
      if (f == "sin") return {std::sin(a.v), std::cos(a.v) * a.d};
      if (f == "cos") return {std::cos(a.v), -std::sin(a.v) * a.d};
      if (f == "exp") return {std::exp(a.v), std::exp(a.v) * a.d};
      if (f == "log") return {std::log(a.v), a.d / a.v};
      if (f == "sqrt") return {std::sqrt(a.v), a.d / (2.0 * std::sqrt(a.v))};
      if (f == "sqr") return {a.v * a.v, 2.0 * a.v * a.d};
      if (f == "tanh") {
        const double t = std::tanh(a.v);
        return {t, (1.0 - t * t) * a.d};
      }
      break;
    }
  }
  throw std::logic_error("corrupt expression tree");
}

}  // namespace

Expression Expression::parse(const std::string& text, const IndexPoset& poset) {
  Expression e;
  e.text_ = text;
  Parser p(text, poset, e.refs_);
  e.root_ = p.parse();
  return e;
}

std::pair<double, Vector> Expression::evaluate(const Vector& ref_values) const {
  if (ref_values.size() != static_cast<Eigen::Index>(refs_.size()))
    throw DimensionMismatch("expression expects " + std::to_string(refs_.size()) + " reference values");
  Dual d = run(root_, ref_values);
  return {d.v, d.d};
}

CylindricalFunction Expression::compile(const FamilyPtr& family) const {
  const auto& poset = family->poset();
  std::vector<Index> levels;
  for (const auto& r : refs_) {
    if (r.coord < 0 || r.coord >= family->dim(r.level))
      throw DimensionMismatch("coordinate " + std::to_string(r.coord) + " outside level " + poset.label(r.level));
    levels.push_back(r.level);
  }
  std::vector<Index> maximal;
  for (const auto& l : levels) {
    bool dominated = std::any_of(levels.begin(), levels.end(), [&](const Index& o) { return poset.lt(l, o); });
    if (!dominated) maximal.push_back(l);
  }
  if (maximal.empty()) {
    auto all = poset.elements();
    if (!all || all->empty()) throw ParseError("constant expression needs a level; reference one coordinate");
    maximal.push_back(all->front());
  }
  Section section(maximal);
  std::map<Index, int> offset;
  int total = 0;
  for (const auto& m : section.members()) {
    offset[m] = total;
    total += family->dim(m);
  }
  // Reference k reads row `coord` of proj(level, member) applied to the member's block.
  struct Reader {
    DifferentiableMap proj;
    int offset;
    int width;
    int coord;
  };
  std::vector<Reader> readers;
  for (const auto& r : refs_) {
    const Index* owner = nullptr;
    for (const auto& m : section.members())
      if (poset.leq(r.level, m)) {
        owner = &m;
        break;
      }
    readers.push_back({family->proj(r.level, *owner), offset[*owner], family->dim(*owner), r.coord});
  }
  auto root = root_;
  const auto nrefs = static_cast<Eigen::Index>(refs_.size());
  auto values = [readers, nrefs](const Vector& y) {
    Vector v(nrefs);
    for (Eigen::Index k = 0; k < nrefs; ++k) {
      const auto& rd = readers[k];
      v[k] = rd.proj(y.segment(rd.offset, rd.width))[rd.coord];
    }
    return v;
  };
  DifferentiableMap base(
      total, 1, [root, values](const Vector& y) { return Vector::Constant(1, run(root, values(y)).v); },
      [root, values, readers, total](const Vector& y) {
        Dual d = run(root, values(y));
        Matrix g = Matrix::Zero(1, total);
        for (std::size_t k = 0; k < readers.size(); ++k) {
          const auto& rd = readers[k];
          if (d.d[k] == 0.0) continue;
          g.middleCols(rd.offset, rd.width) += d.d[k] * rd.proj.jacobian(y.segment(rd.offset, rd.width)).row(rd.coord);
        }
        return g;
      });
  return CylindricalFunction(family, section, std::move(base));
}

}  // namespace profinite
