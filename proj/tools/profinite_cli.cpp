// profinite: command-line audits, distances, flows and Wiener experiments.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "profinite/descriptor.hpp"
#include "profinite/errors.hpp"
#include "profinite/expr.hpp"

using namespace profinite;

namespace {

constexpr int kSchemaVersion = 1;
constexpr int kExitPass = 0;
constexpr int kExitAudit = 1;
constexpr int kExitUsage = 2;

/// Input the user got wrong, as opposed to an audit that failed.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string family = "euclid_tower";
  int size = -1;
  int samples = 100;
  std::uint64_t seed = 0;
  double tol = kLinearTol;
  std::string out;
};

Json report_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks())
    checks.push_back(
        {{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"passed", c.passed()}});
  Json out = {{"passed", r.passed()}, {"checks", checks}, {"failing", r.failing()}};
  if (!r.notes().empty()) out["notes"] = r.notes();
  return out;
}

void complain(const Report& r) {
  for (const auto& c : r.checks())
    if (!c.passed())
      std::cerr << "FAILED " << c.name << ": residual " << std::setprecision(6) << c.residual << " > tolerance "
                << c.tolerance << "\n";
}

/// Explicit --out, else $PROFINITE_OUT_DIR/<default_name>, else stdout.
void emit(const std::string& explicit_path, const std::string& default_name, const std::string& text) {
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* dir = std::getenv("PROFINITE_OUT_DIR"); dir && *dir) {
      std::filesystem::create_directories(dir);
      path = (std::filesystem::path(dir) / default_name).string();
    }
  }
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

Json envelope(const std::string& command, const Common& c) {
  return {{"schema_version", kSchemaVersion}, {"command", command}, {"seed", c.seed}};
}

Json read_json_arg(const std::string& text) {
  try {
    if (!text.empty() && (text.front() == '{' || text.front() == '[')) return Json::parse(text);
    std::ifstream f(text);
    if (!f) throw UsageError("cannot open '" + text + "'");
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

std::vector<double> parse_csv_numbers(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

// --------------------------------------------------------------- verify

int run_verify(const Common& c) {
  auto loaded = load_family_source(c.family, c.size);
  Report report;
  if (loaded.gallery) {
    report = audit_gallery(*loaded.gallery, {.points = c.samples, .tol = c.tol, .seed = c.seed});
  } else {
    const auto chains = sample_chains(loaded.family->poset(), loaded.levels, 200, c.seed);
    report = verify_family(*loaded.family, chains, c.samples, c.tol, c.seed);
  }
  Json out = envelope("verify", c);
  out["family"] = loaded.family->name();
  out["levels"] = loaded.levels.size();
  out["report"] = report_json(report);
  emit(c.out, "verify.json", out.dump(2) + "\n");
  complain(report);
  return report.passed() ? kExitPass : kExitAudit;
}

// ------------------------------------------------------------- distance

int run_distance(const Common& c, const std::string& x_desc, const std::string& y_desc, const std::string& metric,
                 int level_budget, const std::string& weights_path) {
  auto loaded = load_family_source(c.family, c.size);
  const Thread x = load_thread(loaded, read_json_arg(x_desc));
  const Thread y = load_thread(loaded, read_json_arg(y_desc));
  LevelMetricFamily m = metric == "discrete" ? LevelMetricFamily::discrete(loaded.family)
                                             : LevelMetricFamily::euclidean(loaded.family);
  const int budget = std::min<int>(level_budget, static_cast<int>(loaded.levels.size()));
  std::vector<std::vector<Index>> sets;
  for (int k = 1; k <= budget; ++k) sets.emplace_back(loaded.levels.begin(), loaded.levels.begin() + k);
  auto dinf = d_inf(m, x, y, sets, c.tol);

  Report report;
  report.record("d_inf_bounds", (dinf.value < 0.0 || dinf.value > 1.0) ? 1.0 : 0.0, 0.0);
  Json out = envelope("distance", c);
  out["family"] = loaded.family->name();
  out["metric"] = m.kind;
  out["d_inf"] = {{"value", dinf.value}, {"converged", dinf.converged}, {"partial", dinf.partial}};
  if (!weights_path.empty()) {
    std::ifstream f(weights_path);
    if (!f) throw UsageError("cannot open weights file '" + weights_path + "'");
    auto mu = parse_weights_csv(f, loaded.family->poset());
    auto dmu = d_mu(m, mu, x, y);
    report.record("d_mu_bounds", (dmu.value < 0.0 || dmu.value > mu.total_mass()) ? 1.0 : 0.0, 0.0);
    out["d_mu"] = {{"value", dmu.value}, {"tail_bound", dmu.tail_bound}, {"total_mass", mu.total_mass()}};
  }
  out["report"] = report_json(report);
  emit(c.out, "distance.json", out.dump(2) + "\n");
  complain(report);
  return report.passed() ? kExitPass : kExitAudit;
}

// ----------------------------------------------------------------- flow

int run_flow(const Common& c, std::int64_t level_value, const std::string& h_text, double dt, int steps,
             const std::string& scheme_name, const std::string& x0_text, int every, double energy_tol) {
  auto loaded = load_family_source(c.family, c.size);
  const auto& poset = loaded.family->poset();
  const Index level(level_value);
  if (!poset.contains(level)) throw UsageError("level " + level.to_string() + " is not in the family");
  const int n = loaded.family->dim(level);
  TameForm omega = loaded.gallery && loaded.gallery->forms.contains("omega") ? loaded.gallery->forms.at("omega")
                                                                             : darboux_form(loaded.family);
  CylindricalFunction h = h_text == "oscillator" ? oscillator(loaded.family, level)
                                                 : Expression::parse(h_text, poset).compile(loaded.family);
  Vector x0 = Vector::Zero(n);
  if (x0_text.empty()) {
    x0[0] = 1.0;
  } else {
    auto vals = parse_csv_numbers(x0_text);
    if (static_cast<int>(vals.size()) != n)
      throw UsageError("--x0 needs " + std::to_string(n) + " coordinates, got " + std::to_string(vals.size()));
    for (int i = 0; i < n; ++i) x0[i] = vals[i];
  }
  FlowScheme scheme;
  if (scheme_name == "leapfrog") {
    scheme = FlowScheme::Leapfrog;
  } else if (scheme_name == "midpoint") {
    scheme = FlowScheme::ImplicitMidpoint;
  } else {
    throw UsageError("unknown scheme '" + scheme_name + "'");
  }
  auto traj = flow(omega, h, level, x0, dt, steps, scheme);

  std::ostringstream csv;
  csv << std::setprecision(17) << "step,t";
  for (int i = 0; i < n; ++i) csv << ",x" << i;
  csv << ",H\n";
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    if (every > 1 && s % every != 0 && s + 1 != traj.states.size()) continue;
    csv << s << "," << static_cast<double>(s) * dt;
    for (int i = 0; i < n; ++i) csv << "," << traj.states[s][i];
    csv << "," << traj.energies[s] << "\n";
  }
  emit(c.out, "flow.csv", csv.str());

  const double drift = std::abs(traj.energies.back() - traj.energies.front());
  Report report;
  report.record("energy_drift", drift, energy_tol);
  std::cerr << "energy drift " << std::setprecision(6) << drift << " over " << steps << " steps\n";
  complain(report);
  return report.passed() ? kExitPass : kExitAudit;
}

// --------------------------------------------------------------- wiener

int run_wiener(const Common& c, int pool_size, int components, int draws) {
  auto g = wiener_family(pool_size, components);
  const auto& poset = dynamic_cast<const FiniteSubsetPoset&>(g.family->poset());
  const ParamSet pool = *poset.pool();
  Report report;
  std::mt19937_64 rng(c.seed);

  // Marginals of the sampler at every pool time.
  WienerSampler sampler(g.family, c.seed);
  std::vector<double> sum(pool.size() * components, 0.0), sq(pool.size() * components, 0.0);
  for (int s = 0; s < draws; ++s) {
    Vector v = sampler.sample_at(pool);
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      sum[k] += v[k];
      sq[k] += v[k] * v[k];
    }
  }
  Json marginals = Json::array();
  for (std::size_t i = 0; i < pool.size(); ++i)
    for (int comp = 0; comp < components; ++comp) {
      const std::size_t k = i * components + comp;
      const double mean = sum[k] / draws;
      const double var = sq[k] / draws - mean * mean;
      const double t = pool[i];
      report.record("marginal_mean", std::abs(mean) / (4.0 * std::sqrt(t / draws)), 1.0);
      report.record("marginal_variance", std::abs(var - t) / t, 0.05);
      marginals.push_back({{"t", t}, {"component", comp}, {"mean", mean}, {"variance", var}});
    }

  // Pairing against direct summation, and invariance under refinement.
  const SectionPoint path = sampler.sample();
  const Index top = path.section.members().front();
  Thread h = wiener_path_thread(g.family, pool, path.values.at(top));
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int s = 0; s < std::min(c.samples, 200); ++s) {
    ParamSet k_times;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (rng() % 2) k_times.push_back(pool[i]);
    if (k_times.empty()) k_times.push_back(pool[pick(rng)]);
    const Index k = Index::params(k_times);
    Vector xi = random_point(g.family->dim(k), rng);
    const double paired = wiener_pairing(k_times, xi, [&](double t) { return h(Index::params({t})); });
    const Vector hk = h(k);
    double direct = 0.0;
    for (Eigen::Index i = 0; i < xi.size(); ++i) direct += xi[i] * hk[i];
    report.record("pairing_direct_sum", std::abs(paired - direct), 0.0);
    const Vector pushed = g.family->proj(k, top).jacobian(Vector::Zero(g.family->dim(top))).transpose() * xi;
    report.record("refinement_invariance", std::abs(pushed.dot(h(top)) - paired), 1e-12);
  }

  // PL cocycle on random inclusion triples.
  for (int s = 0; s < std::min(c.samples, 200); ++s) {
    ParamSet a, b, m;
    for (double t : pool) {
      const auto r = rng() % 4;
      if (r == 0) a.push_back(t);
      if (r <= 1) b.push_back(t);
      if (r <= 2) m.push_back(t);
    }
    const Index ia = Index::params(a), ib = Index::params(b), im = Index::params(m);
    Vector x = random_point(g.family->dim(ia), rng);
    const Vector two_step = g.family->inj(ib, im)(g.family->inj(ia, ib)(x));
    report.record("pl_cocycle", max_abs_diff(two_step, g.family->inj(ia, im)(x)), 1e-12);
  }

  Json out = envelope("wiener", c);
  out["pool"] = pool;
  out["components"] = components;
  out["draws"] = draws;
  out["marginals"] = marginals;
  out["report"] = report_json(report);
  emit(c.out, "wiener.json", out.dump(2) + "\n");
  complain(report);
  return report.passed() ? kExitPass : kExitAudit;
}

// ----------------------------------------------------------- symplectic

int run_symplectic(const Common& c) {
  auto loaded = load_family_source(c.family, c.size);
  if (!loaded.gallery || !loaded.gallery->forms.contains("omega"))
    throw UsageError("family '" + c.family + "' carries no symplectic form");
  const auto& g = *loaded.gallery;
  const TameForm omega = g.forms.at("omega");
  const int samples = std::max(1, c.samples / 10);
  auto cert = SymplecticStructure::certify(omega, g.sample_levels, samples, c.tol, c.seed);

  Report report = cert.certificate;
  Json ranks = Json::array();
  for (const auto& r : cert.ranks.levels) ranks.push_back({{"level", r.level.to_string()}, {"rank", r.rank}, {"dim", r.dim}});
  report.record_verdict("projectively_nondegenerate", cert.ranks.nondegenerate);

  if (cert.symplectic) {
    const auto pairs = comparable_pairs(g.family->poset(), g.sample_levels);
    const Index lowest = g.sample_levels.front();
    const Index highest = g.sample_levels.back();
    auto h = oscillator(g.family, lowest);
    report.merge(hamiltonian_compat_check(omega, h, pairs, samples, 1e-10, c.seed));
    std::mt19937_64 rng(c.seed);
    for (const auto& j : g.sample_levels)
      for (int s = 0; s < samples; ++s) {
        Vector x = random_point(g.family->dim(j), rng);
        auto hj = oscillator(g.family, j);
        report.record("defining_identity", defining_identity_residual(omega, hj, j, x, hamiltonian_field(omega, hj, j, x)),
                      1e-10);
      }
    if (g.name == "symplectic_even_tower") {
      auto act = torus_action(g.family);
      report.merge(check_action(act, omega, pairs, g.sample_levels, samples, 1e-8, c.seed));
      Vector xi = random_point(static_cast<int>(act.generators(highest).size()), rng);
      report.merge(momentum_verify(omega, act, torus_momentum(g.family), xi, highest, samples, 1e-6, c.seed));
    }
  }
  Json out = envelope("symplectic", c);
  out["family"] = g.name;
  out["presymplectic"] = cert.presymplectic;
  out["symplectic"] = cert.symplectic;
  out["ranks"] = ranks;
  out["report"] = report_json(report);
  emit(c.out, "symplectic.json", out.dump(2) + "\n");
  complain(report);
  return report.passed() ? kExitPass : kExitAudit;
}

// -------------------------------------------------------------- gallery

int run_gallery_list(const Common& c) {
  Json entries = Json::array();
  for (const auto& e : gallery_catalog())
    entries.push_back({{"name", e.name}, {"description", e.description}, {"size_param", e.size_param},
                       {"default_size", e.default_size}});
  Json out = envelope("gallery list", c);
  out["families"] = entries;
  emit(c.out, "gallery.json", out.dump(2) + "\n");
  return kExitPass;
}

int run_gallery_describe(const Common& c, const std::string& name) {
  GalleryFamily g;
  try {
    g = make_gallery(name, c.size);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Json out = envelope("gallery describe", c);
  out["description"] = g.description;
  out["params"] = g.params;
  std::vector<std::string> threads, forms, metrics;
  for (const auto& [k, v] : g.threads) threads.push_back(k);
  for (const auto& [k, v] : g.forms) forms.push_back(k);
  for (const auto& [k, v] : g.metrics) metrics.push_back(k);
  out["threads"] = threads;
  out["forms"] = forms;
  out["metrics"] = metrics;
  out["descriptor"] = export_descriptor(g);
  emit(c.out, "describe.json", out.dump(2) + "\n");
  return kExitPass;
}

void add_common(CLI::App* app, Common& c, bool with_family = true) {
  if (with_family) {
    app->add_option("--family", c.family, "gallery name or descriptor JSON path")->capture_default_str();
    app->add_option("--max-level,--size", c.size, "gallery size parameter (default per family)");
  }
  app->add_option("--samples", c.samples, "random points per chain or level")->capture_default_str();
  app->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  app->add_option("--tol", c.tol, "tolerance for exact checks")->capture_default_str();
  app->add_option("-o,--out", c.out, "output path ('-' for stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Audits and experiments on profinite families of manifolds"};
  app.require_subcommand(1);
  Common common;

  auto* verify = app.add_subcommand("verify", "structural axioms, tame forms, metrics and threads");
  add_common(verify, common);

  std::string x_desc, y_desc, metric = "euclidean", weights;
  int level_budget = 10;
  auto* distance = app.add_subcommand("distance", "bounded sup distance and measure distance of two threads");
  add_common(distance, common);
  distance->add_option("--x", x_desc, "thread descriptor (JSON text or path)")->required();
  distance->add_option("--y", y_desc, "thread descriptor (JSON text or path)")->required();
  distance->add_option("--metric", metric, "level metric")
      ->check(CLI::IsMember({"euclidean", "discrete"}))
      ->capture_default_str();
  distance->add_option("--levels", level_budget, "number of levels for the partial supremum")->capture_default_str();
  distance->add_option("--weights", weights, "CSV file of index,weight lines");

  std::int64_t level = 2;
  std::string h_text = "oscillator", scheme = "leapfrog", x0;
  double dt = 1e-3, energy_tol = 1e-6;
  int steps = 10000, every = 1;
  auto* flow_cmd = app.add_subcommand("flow", "integrate a Hamiltonian field on one level, CSV output");
  add_common(flow_cmd, common);
  flow_cmd->add_option("--level", level, "level index")->capture_default_str();
  flow_cmd->add_option("--H", h_text, "'oscillator' or an expression such as 'sqr(level:2:0)'")->capture_default_str();
  flow_cmd->add_option("--dt", dt, "time step")->capture_default_str()->check(CLI::PositiveNumber);
  flow_cmd->add_option("--steps", steps, "number of steps")->capture_default_str()->check(CLI::NonNegativeNumber);
  flow_cmd->add_option("--scheme", scheme, "leapfrog or midpoint")->capture_default_str();
  flow_cmd->add_option("--x0", x0, "initial point, comma separated (default e_0)");
  flow_cmd->add_option("--every", every, "write every k-th state")->capture_default_str()->check(CLI::PositiveNumber);
  flow_cmd->add_option("--energy-tol", energy_tol, "allowed |H(end) - H(start)|")->capture_default_str();

  int pool_size = 8, components = 1, draws = 100000;
  auto* wiener = app.add_subcommand("wiener", "sampler marginals, pairing, refinement and cocycle checks");
  add_common(wiener, common, false);
  wiener->add_option("--pool", pool_size, "number of dyadic times")->capture_default_str()->check(CLI::Range(1, 16));
  wiener->add_option("--components", components, "path dimension")->capture_default_str()->check(CLI::Range(1, 8));
  wiener->add_option("--draws", draws, "sampler draws")->capture_default_str()->check(CLI::PositiveNumber);

  auto* symplectic = app.add_subcommand("symplectic", "closedness, ranks, Hamiltonian fields and momentum map");
  add_common(symplectic, common);
  symplectic->get_option("--family")->default_str("symplectic_even_tower");

  std::string describe_name;
  auto* gallery = app.add_subcommand("gallery", "built-in families");
  gallery->require_subcommand(1);
  auto* list = gallery->add_subcommand("list", "list the built-in families");
  add_common(list, common, false);
  auto* describe = gallery->add_subcommand("describe", "parameters, distinguished data and JSON descriptor");
  add_common(describe, common, false);
  describe->add_option("name", describe_name, "family name")->required();
  describe->add_option("--size", common.size, "size parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (symplectic->parsed() && symplectic->get_option("--family")->count() == 0) common.family = "symplectic_even_tower";

  try {
    if (verify->parsed()) return run_verify(common);
    if (distance->parsed()) return run_distance(common, x_desc, y_desc, metric, level_budget, weights);
    if (flow_cmd->parsed()) return run_flow(common, level, h_text, dt, steps, scheme, x0, every, energy_tol);
    if (wiener->parsed()) return run_wiener(common, pool_size, components, draws);
    if (symplectic->parsed()) return run_symplectic(common);
    if (list->parsed()) return run_gallery_list(common);
    if (describe->parsed()) return run_gallery_describe(common, describe_name);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "audit failure: " << e.what() << "\n";
    return kExitAudit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
