#include "profinite/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "profinite/errors.hpp"

namespace profinite {

namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("matrix payload must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Matrix(0, 0);
  if (!j[0].is_array()) throw ParseError("matrix payload must be an array of rows");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) throw ParseError("ragged matrix payload");
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) throw ParseError("matrix entries must be numbers");
      m(r, c) = j[r][c].get<double>();
    }
  }
  return m;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  if (m.size() == 0) return rows;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("vector must be an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ParseError("vector entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

}  // namespace

PosetPtr load_poset(const Json& j) {
  const auto kind = field<std::string>(j, "kind");
  try {
    if (kind == "finite") {
      const auto names = field<std::vector<std::string>>(j, "names");
      const auto raw = field<std::vector<std::vector<int>>>(j, "leq");
      std::vector<std::vector<bool>> leq;
      for (const auto& row : raw) leq.emplace_back(row.begin(), row.end());
      return std::make_shared<FinitePoset>(names, leq);
    }
    if (kind == "chain") {
      std::optional<std::int64_t> hi;
      if (j.contains("hi") && !j["hi"].is_null()) hi = field<std::int64_t>(j, "hi");
      const std::int64_t step = j.contains("step") ? field<std::int64_t>(j, "step") : 1;
      return std::make_shared<ChainPoset>(field<std::int64_t>(j, "lo"), hi, step);
    }
    if (kind == "finite-subsets") {
      std::optional<ParamSet> pool;
      if (j.contains("pool")) pool = field<ParamSet>(j, "pool");
      return std::make_shared<FiniteSubsetPoset>(field<double>(j, "lo"), field<double>(j, "hi"), pool);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid poset: ") + e.what());
  }
  throw ParseError("unknown poset kind '" + kind + "'");
}

Json poset_descriptor(const IndexPoset& poset) {
  if (const auto* f = dynamic_cast<const FinitePoset*>(&poset)) {
    Json leq = Json::array();
    for (const auto& row : f->relation()) {
      Json r = Json::array();
      for (bool b : row) r.push_back(b ? 1 : 0);
      leq.push_back(std::move(r));
    }
    return {{"kind", "finite"}, {"names", f->names()}, {"leq", leq}};
  }
  if (const auto* c = dynamic_cast<const ChainPoset*>(&poset)) {
    Json hi = c->hi() ? Json(*c->hi()) : Json(nullptr);
    return {{"kind", "chain"}, {"lo", c->lo()}, {"hi", hi}, {"step", c->step()}};
  }
  const auto& s = dynamic_cast<const FiniteSubsetPoset&>(poset);
  Json out = {{"kind", "finite-subsets"}, {"lo", s.lo()}, {"hi", s.hi()}};
  if (s.pool()) out["pool"] = *s.pool();
  return out;
}

Index index_from_json(const IndexPoset& poset, const Json& j) {
  Index idx;
  if (j.is_number_integer()) {
    idx = Index(j.get<std::int64_t>());
  } else if (j.is_array()) {
    ParamSet ts;
    for (const auto& t : j) {
      if (!t.is_number()) throw ParseError("time sets must contain numbers");
      ts.push_back(t.get<double>());
    }
    idx = Index::params(ts);
  } else if (j.is_string()) {
    const auto text = j.get<std::string>();
    const auto* f = dynamic_cast<const FinitePoset*>(&poset);
    if (auto found = f ? f->find(text) : std::nullopt) {
      idx = *found;
    } else {
      idx = parse_index(text);
    }
  } else {
    throw ParseError("index must be an integer, an array of times or a name");
  }
  if (!poset.contains(idx)) throw ParseError("index " + idx.to_string() + " is not in the poset");
  return idx;
}

Json index_to_json(const IndexPoset& poset, const Index& j) {
  if (j.is_params()) return Json(j.param_set());
  if (dynamic_cast<const FinitePoset*>(&poset)) return Json(poset.label(j));
  return Json(j.integer());
}

namespace {

DifferentiableMap stored_map(const Json& entry, bool projection, const IndexPoset& poset, const Index& lower,
                             const Index& upper, const std::map<Index, int>& dims) {
  const auto kind = field<std::string>(entry, "kind");
  const int dl = dims.at(lower), du = dims.at(upper);
  const int rows = projection ? dl : du, cols = projection ? du : dl;
  Matrix m;
  if (kind == "matrix") {
    m = matrix_from_json(field<Json>(entry, "payload"));
    if (m.size() == 0 && rows * cols == 0) m.resize(rows, cols);
  } else if (kind == "truncation") {
    if (lower.is_params()) {
      const auto& lo_t = lower.param_set();
      const auto& hi_t = upper.param_set();
      const int n = lo_t.empty() ? (hi_t.empty() ? 1 : du / int(hi_t.size())) : dl / int(lo_t.size());
      Matrix sel = Matrix::Zero(dl, du);
      for (std::size_t r = 0; r < lo_t.size(); ++r) {
        auto it = std::find(hi_t.begin(), hi_t.end(), lo_t[r]);
        if (it == hi_t.end()) throw ParseError("truncation between non-nested time sets");
        for (int c = 0; c < n; ++c) sel(int(r) * n + c, int(it - hi_t.begin()) * n + c) = 1.0;
      }
      m = projection ? sel : Matrix(sel.transpose());
    } else {
      m = projection ? truncation_matrix(dl, du) : Matrix(truncation_matrix(dl, du).transpose());
    }
  } else if (kind == "pl-interpolation") {
    if (projection || !lower.is_params()) throw ParseError("pl-interpolation is an injection between time sets");
    const int n = lower.param_set().empty() ? 1 : dl / int(lower.param_set().size());
    Matrix pl(du, dl);
    for (int c = 0; c < dl; ++c) {
      Vector e = Vector::Zero(dl);
      e[c] = 1.0;
      pl.col(c) = pl_interpolate(lower.param_set(), e, upper.param_set(), n);
    }
    m = pl;
  } else if (kind == "named-gallery") {
    const auto payload = field<Json>(entry, "payload");
    const int size = payload.contains("size") ? field<int>(payload, "size") : -1;
    auto g = make_gallery(field<std::string>(payload, "gallery"), size);
    return projection ? g.family->proj(lower, upper) : g.family->inj(lower, upper);
  } else {
    throw ParseError("unknown map kind '" + kind + "'");
  }
  if (m.rows() != rows || m.cols() != cols)
    throw ParseError("map " + poset.label(lower) + " <-> " + poset.label(upper) + " has shape " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  return DifferentiableMap::linear(m);
}

}  // namespace

LoadedFamily load_family(const Json& j) {
  if (!j.is_object()) throw ParseError("family descriptor must be a JSON object");
  if (j.contains("gallery")) {
    const int size = j.contains("size") ? field<int>(j, "size") : -1;
    try {
      auto g = make_gallery(field<std::string>(j, "gallery"), size);
      return {g.family, g.sample_levels, g};
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  }
  auto poset = load_poset(field<Json>(j, "poset"));
  std::map<Index, int> dims;
  std::vector<Index> levels;
  for (const auto& level : field<Json>(j, "levels")) {
    const Index idx = index_from_json(*poset, field<Json>(level, "index"));
    const int dim = field<int>(level, "dim");
    if (dim < 0) throw ParseError("negative level dimension");
    if (!dims.emplace(idx, dim).second) throw ParseError("level " + idx.to_string() + " declared twice");
    levels.push_back(idx);
  }
  std::map<std::pair<Index, Index>, DifferentiableMap> projections, injections;
  auto read_maps = [&](const char* key, bool projection, auto& out) {
    if (!j.contains(key)) return;
    for (const auto& entry : j.at(key)) {
      const Index from = index_from_json(*poset, field<Json>(entry, "from"));
      const Index to = index_from_json(*poset, field<Json>(entry, "to"));
      const Index lower = projection ? to : from, upper = projection ? from : to;
      if (!poset->leq(lower, upper))
        throw ParseError(std::string(key) + " entry between incomparable levels " + poset->label(from) + ", " +
                         poset->label(to));
      if (!dims.contains(lower) || !dims.contains(upper)) throw ParseError("map between undeclared levels");
      out.insert_or_assign({lower, upper}, stored_map(entry, projection, *poset, lower, upper, dims));
    }
  };
  read_maps("projections", true, projections);
  read_maps("injections", false, injections);
  const std::string name = j.contains("name") ? field<std::string>(j, "name") : "descriptor";
  return {ProfiniteFamily::from_stored_maps(name, poset, dims, projections, injections), levels, std::nullopt};
}

LoadedFamily load_family_source(const std::string& name_or_path, int size) {
  const auto& catalog = gallery_catalog();
  const bool is_gallery = std::any_of(catalog.begin(), catalog.end(),
                                      [&](const GalleryEntry& e) { return e.name == name_or_path; });
  if (is_gallery && !std::filesystem::exists(name_or_path)) return load_family({{"gallery", name_or_path}, {"size", size}});
  std::ifstream in(name_or_path);
  if (!in) throw ParseError("cannot open family descriptor '" + name_or_path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(name_or_path + ": " + e.what());
  }
  return load_family(j);
}

namespace {

std::vector<std::pair<Index, Index>> covering_pairs(const IndexPoset& poset, const std::vector<Index>& levels) {
  std::vector<std::pair<Index, Index>> out;
  for (const auto& a : levels)
    for (const auto& b : levels) {
      if (!poset.lt(a, b)) continue;
      bool covering = true;
      for (const auto& c : levels) covering = covering && !(poset.lt(a, c) && poset.lt(c, b));
      if (covering) out.emplace_back(a, b);
    }
  return out;
}

}  // namespace

Json export_descriptor(const GalleryFamily& g) {
  const auto& poset = g.family->poset();
  Json levels = Json::array(), projections = Json::array(), injections = Json::array();
  for (const auto& j : g.sample_levels)
    levels.push_back({{"index", index_to_json(poset, j)}, {"dim", g.family->dim(j)}});
  for (const auto& [lo, hi] : covering_pairs(poset, g.sample_levels)) {
    const Vector origin_hi = Vector::Zero(g.family->dim(hi)), origin_lo = Vector::Zero(g.family->dim(lo));
    projections.push_back({{"from", index_to_json(poset, hi)},
                           {"to", index_to_json(poset, lo)},
                           {"kind", "matrix"},
                           {"payload", matrix_to_json(g.family->proj(lo, hi).jacobian(origin_hi))}});
    injections.push_back({{"from", index_to_json(poset, lo)},
                          {"to", index_to_json(poset, hi)},
                          {"kind", "matrix"},
                          {"payload", matrix_to_json(g.family->inj(lo, hi).jacobian(origin_lo))}});
  }
  return {{"name", g.name},
          {"poset", poset_descriptor(poset)},
          {"levels", levels},
          {"projections", projections},
          {"injections", injections}};
}

Thread load_thread(const LoadedFamily& f, const Json& j) {
  if (!j.is_object()) throw ParseError("thread descriptor must be a JSON object");
  if (j.contains("zero")) {
    auto family = f.family;
    return Thread(family, [family](const Index& i) { return Vector(Vector::Zero(family->dim(i))); });
  }
  if (j.contains("gallery")) {
    const auto name = field<std::string>(j, "gallery");
    if (!f.gallery || !f.gallery->threads.contains(name)) throw ParseError("no gallery thread named '" + name + "'");
    return f.gallery->threads.at(name);
  }
  const auto members = field<Json>(j, "section");
  const auto values = field<Json>(j, "values");
  if (!members.is_array() || !values.is_array() || members.size() != values.size())
    throw ParseError("section and values must be arrays of equal length");
  SectionPoint p;
  std::vector<Index> idx;
  for (std::size_t k = 0; k < members.size(); ++k) {
    idx.push_back(index_from_json(f.family->poset(), members[k]));
    Vector v = vector_from_json(values[k]);
    if (v.size() != f.family->dim(idx.back()))
      throw ParseError("value at " + idx.back().to_string() + " has size " + std::to_string(v.size()));
    p.values[idx.back()] = v;
  }
  p.section = Section(idx);
  try {
    if (auto all = f.family->poset().elements()) return thread_from_section(f.family, p);
    return thread_from_section(f.family, p, std::span<const Index>(f.levels));
  } catch (const IllDefinedSection& e) {
    throw ParseError(e.what());
  }
}

IndexMeasure parse_weights_csv(std::istream& in, const IndexPoset& poset) {
  IndexMeasure mu;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected index,weight");
    const std::string key = line.substr(0, comma), value = line.substr(comma + 1);
    if (lineno == 1 && key == "index") continue;
    double w = 0.0;
    try {
      std::size_t used = 0;
      w = std::stod(value, &used);
      if (used != value.size()) throw ParseError("trailing characters");
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(lineno) + ": bad weight '" + value + "'");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) throw ParseError("line " + std::to_string(lineno) + ": weights must be finite and >= 0");
    if (key == "tail") {
      mu.tail_mass += w;
      continue;
    }
    const std::string trimmed = key.size() >= 2 && key.front() == '"' && key.back() == '"' ? key.substr(1, key.size() - 2) : key;
    Index idx;
    const auto* f = dynamic_cast<const FinitePoset*>(&poset);
    if (auto found = f ? f->find(trimmed) : std::nullopt) {
      idx = *found;
    } else {
      idx = parse_index(trimmed);
    }
    if (!poset.contains(idx)) throw ParseError("line " + std::to_string(lineno) + ": index not in the poset");
    mu.weights.emplace_back(idx, w);
  }
  return mu;
}

}  // namespace profinite
