#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nhs/exceptional.hpp"
#include "nhs/fermions.hpp"
#include "nhs/metric.hpp"
#include "nhs/spectra.hpp"

using json = nlohmann::ordered_json;
using namespace nhs;

namespace {

constexpr int kInputError = 2;
constexpr int kComputeError = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Keys each preset understands; analysis keys are added per command.
const std::map<std::string, std::set<std::string>> kPresetKeys = {
    {"qubit", {"omega", "t"}},
    {"uniform", {"n", "m", "t", "detuning", "gain"}},
    {"3x3", {"detuning", "gain"}},
    {"far-impurity", {"n", "t", "detuning", "gain"}},
    {"ring", {"n", "t", "alpha_n", "beta_n"}},
    {"ssh", {"n", "t1", "t2", "t_left", "t_right", "z1", "zn"}},
    {"nn-defect", {"n", "t", "hoppings", "edge_potentials", "detuning", "gain"}},
};

const std::map<std::string, std::set<std::string>> kAnalysisKeys = {
    {"spectrum", {}},
    {"ep-contour", {"x_min", "x_max", "y_min", "y_max", "column"}},
    {"metric", {"z"}},
    {"locality", {"mode", "unit_modulus", "subsystem"}},
    {"inclusion", {}},
    {"puiseux", {"x", "y", "dx", "dy"}},
};

struct Options {
  std::string model_file;
  std::string preset;
  std::vector<std::string> params;
  double tol = -1.0;
  int resolution = 0;
  long long seed = 0;
  std::string out;
};

struct Model {
  std::string preset;     // empty for an explicit matrix
  json params = json::object();
  std::optional<LatticeSpec> spec;
};

// ---- parsing helpers

json parse_scalar(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used == text.size()) return v;
    } else {
      std::size_t u1 = 0, u2 = 0;
      const std::string re = text.substr(0, comma), im = text.substr(comma + 1);
      const double a = std::stod(re, &u1), b = std::stod(im, &u2);
      if (u1 == re.size() && u2 == im.size()) return json::array({a, b});
    }
  } catch (const std::exception&) {
  }
  if (text == "true" || text == "false") return text == "true";
  return text;
}

double get_real(const json& p, const std::string& key, double fallback) {
  if (!p.contains(key)) return fallback;
  if (!p[key].is_number()) throw InputError("parameter '" + key + "' must be a real number");
  return p[key].get<double>();
}

int get_int(const json& p, const std::string& key, int fallback) {
  const double v = get_real(p, key, fallback);
  if (v != std::floor(v)) throw InputError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

cplx to_complex(const json& v, const std::string& what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) return {v[0].get<double>(), v[1].get<double>()};
  throw InputError(what + " must be a number or an [re, im] pair");
}

cplx get_complex(const json& p, const std::string& key, cplx fallback) {
  return p.contains(key) ? to_complex(p[key], "parameter '" + key + "'") : fallback;
}

std::vector<cplx> complex_list(const json& v, const std::string& what) {
  if (!v.is_array()) throw InputError(what + " must be a list");
  std::vector<cplx> out;
  for (const auto& e : v) out.push_back(to_complex(e, what + " entry"));
  return out;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* name(PtKind k) {
  switch (k) {
    case PtKind::Unbroken: return "Unbroken";
    case PtKind::Broken: return "Broken";
    case PtKind::NotApplicable: return "NotApplicable";
  }
  return "";
}

const char* name(Positivity p) {
  switch (p) {
    case Positivity::PositiveDefinite: return "PositiveDefinite";
    case Positivity::PositiveSemidefinite: return "PositiveSemidefinite";
    case Positivity::Indefinite: return "Indefinite";
  }
  return "";
}

const char* name(SingularClass c) {
  switch (c) {
    case SingularClass::Cusp: return "Cusp";
    case SingularClass::Acnode: return "Acnode";
    case SingularClass::Crunode: return "Crunode";
  }
  return "";
}

// ---- model construction

NearestNeighbourDefect nn_preset(const json& p) {
  const int n = get_int(p, "n", 6);
  if (n < 2 || n % 2) throw InputError("nn-defect needs even n >= 2");
  NearestNeighbourDefect d;
  if (p.contains("hoppings")) {
    d.hoppings = complex_list(p["hoppings"], "hoppings");
    if (static_cast<int>(d.hoppings.size()) != n - 1) throw InputError("hoppings must have n - 1 entries");
  } else {
    d.hoppings.assign(static_cast<std::size_t>(n - 1), get_complex(p, "t", 1.0));
  }
  if (p.contains("edge_potentials")) {
    if (!p["edge_potentials"].is_array()) throw InputError("edge_potentials must be a list");
    for (const auto& e : p["edge_potentials"]) {
      if (!e.is_number()) throw InputError("edge_potentials must be real");
      d.edge_potentials.push_back(e.get<double>());
    }
    if (static_cast<int>(d.edge_potentials.size()) != n / 2 - 1) throw InputError("edge_potentials must have n/2 - 1 entries");
  } else {
    d.edge_potentials.assign(static_cast<std::size_t>(n / 2 - 1), 0.0);
  }
  d.detuning = get_real(p, "detuning", 0.0);
  d.gain = get_real(p, "gain", 0.0);
  return d;
}

ModelPreset make_preset(const std::string& preset, const json& p) {
  if (preset == "qubit") return Qubit{get_real(p, "omega", 0.5), get_real(p, "t", 1.0)};
  if (preset == "uniform" || preset == "far-impurity" || preset == "3x3") {
    const bool small = preset == "3x3";
    const int n = small ? 3 : get_int(p, "n", 5);
    const int m = preset == "uniform" ? get_int(p, "m", 1) : 1;
    const double t = small ? 1.0 : get_real(p, "t", 1.0);
    const double d = get_real(p, "detuning", 0.0), g = get_real(p, "gain", 0.0);
    return UniformChain{n, m, t, cplx(d, g), cplx(d, -g)};
  }
  if (preset == "ring")
    return Ring{get_int(p, "n", 6), get_complex(p, "t", 1.0), get_complex(p, "alpha_n", 1.0), get_complex(p, "beta_n", 1.0)};
  if (preset == "ssh")
    return SshEdgeDefect{get_int(p, "n", 6),          get_complex(p, "t1", 1.0),     get_complex(p, "t2", 0.5),
                         get_complex(p, "t_left", 0.0), get_complex(p, "t_right", 0.0), get_complex(p, "z1", 0.0),
                         get_complex(p, "zn", 0.0)};
  if (preset == "nn-defect") return nn_preset(p);
  throw InputError("unknown preset '" + preset + "'");
}

void check_keys(const json& p, const std::set<std::string>& allowed, const std::string& context) {
  for (const auto& [key, value] : p.items())
    if (!allowed.count(key)) throw InputError("unknown field '" + key + "' for " + context);
}

Model load_model(const Options& opt, const std::string& command) {
  Model model;
  json explicit_spec;
  if (!opt.model_file.empty()) {
    std::ifstream in(opt.model_file);
    if (!in) throw InputError("cannot open model file " + opt.model_file);
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw InputError(std::string("model file: ") + e.what());
    }
    if (!doc.is_object()) throw InputError("model file must hold an object");
    check_keys(doc, {"preset", "params", "n", "alpha", "beta", "z", "analysis"}, "model file");
    if (doc.contains("preset")) {
      if (!doc["preset"].is_string()) throw InputError("preset must be a string");
      model.preset = doc["preset"].get<std::string>();
    }
    for (const char* key : {"params", "analysis"})
      if (doc.contains(key)) {
        if (!doc[key].is_object()) throw InputError(std::string(key) + " must be an object");
        model.params.update(doc[key]);
      }
    for (const char* key : {"n", "alpha", "beta", "z"})
      if (doc.contains(key)) explicit_spec[key] = doc[key];
  }
  if (!opt.preset.empty()) model.preset = opt.preset;
  for (const auto& kv : opt.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("parameter '" + kv + "' is not key=value");
    model.params[kv.substr(0, eq)] = parse_scalar(kv.substr(eq + 1));
  }

  std::set<std::string> allowed = kAnalysisKeys.at(command);
  if (!model.preset.empty()) {
    if (!explicit_spec.is_null()) throw InputError("give either a preset or an explicit matrix, not both");
    const auto it = kPresetKeys.find(model.preset);
    if (it == kPresetKeys.end()) throw InputError("unknown preset '" + model.preset + "'");
    allowed.insert(it->second.begin(), it->second.end());
    check_keys(model.params, allowed, "preset " + model.preset);
    try {
      model.spec = expand(make_preset(model.preset, model.params));
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    return model;
  }
  if (explicit_spec.is_null()) throw InputError("no model: pass --preset or --model");
  check_keys(model.params, allowed, "explicit model");
  for (const char* key : {"n", "alpha", "beta", "z"})
    if (!explicit_spec.contains(key)) throw InputError(std::string("explicit model needs '") + key + "'");
  if (!explicit_spec["n"].is_number_integer()) throw InputError("n must be an integer");
  const int n = explicit_spec["n"].get<int>();
  LatticeSpec spec{complex_list(explicit_spec["alpha"], "alpha"), complex_list(explicit_spec["beta"], "beta"),
                   complex_list(explicit_spec["z"], "z")};
  if (spec.n() != n) throw InputError("z must have n entries");
  try {
    spec.validate();
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  model.spec = std::move(spec);
  return model;
}

ParamBox box_from(const json& p, ParamBox fallback) {
  ParamBox b{get_real(p, "x_min", fallback.x_min), get_real(p, "x_max", fallback.x_max), get_real(p, "y_min", fallback.y_min),
             get_real(p, "y_max", fallback.y_max)};
  if (!(b.x_min < b.x_max && b.y_min < b.y_max)) throw InputError("empty parameter box");
  return b;
}

ParamFamily family_for(const Model& model) {
  const json& p = model.params;
  if (model.preset == "qubit") return qubit_family(box_from(p, {-2, 2, -2, 2}));
  if (model.preset == "3x3") return mirrored_defect_family(3, 1, 1.0, box_from(p, {-3, 3, -3, 3}));
  if (model.preset == "uniform" || model.preset == "far-impurity") {
    const int n = get_int(p, "n", 5);
    const int m = model.preset == "uniform" ? get_int(p, "m", 1) : 1;
    return mirrored_defect_family(n, m, get_real(p, "t", 1.0), box_from(p, {-3, 3, -3, 3}));
  }
  if (model.preset == "nn-defect") return nn_defect_family(nn_preset(p), box_from(p, {-3, 3, -3, 3}));
  throw InputError("no parameter family for preset '" + model.preset + "'");
}

// ---- commands

json cmd_spectrum(const Model& model, const Options& opt) {
  EigOptions eo;
  if (opt.tol > 0) eo.cluster_tol = opt.tol;
  const auto r = eig(build_matrix(*model.spec), eo);
  json values = json::array();
  for (const auto& e : r.eigenvalues)
    values.push_back({{"value", to_json(e.value)}, {"algebraic", e.algebraic}, {"geometric", e.geometric}});
  json pairs = json::array();
  for (const auto& [a, b] : r.pt.broken_pairs) pairs.push_back(json::array({to_json(a), to_json(b)}));
  return {{"command", "spectrum"},  {"n", model.spec->n()},     {"eigenvalues", values},
          {"pt_class", name(r.pt.kind)}, {"broken_pairs", pairs}, {"max_residual", r.max_residual}};
}

json singular_json(const std::vector<SingularPoint>& points) {
  json out = json::array();
  for (const auto& s : points)
    out.push_back({{"point", json::array({s.point.x, s.point.y})},
                   {"class", name(s.cls)},
                   {"ep_order", s.ep_order},
                   {"jump_order", s.jump_order}});
  return out;
}

json cmd_ep_contour(const Model& model, const Options& opt) {
  const ParamFamily family = family_for(model);
  LocusOptions lo;
  if (opt.tol > 0) lo.residual_tol = opt.tol;
  const int resolution = opt.resolution > 0 ? opt.resolution : 128;
  const EPContour contour = ep_locus(family, resolution, lo);
  const auto singular = singular_points(family, contour);

  std::ostringstream rows;
  rows << std::setprecision(12);
  json samples = json::array();
  for (std::size_t s = 0; s < contour.segments.size(); ++s)
    for (const auto& pt : contour.segments[s]) {
      const auto d = discriminant_surface(family, pt);
      const double mag = std::hypot(d.re, d.im);
      rows << pt.x << ' ' << pt.y << ' ' << mag << ' ' << s << '\n';
      if (opt.out.empty()) samples.push_back(json::array({pt.x, pt.y, mag, s}));
    }

  json report = {{"command", "ep-contour"},
                 {"family", family.label},
                 {"box", json::array({family.box.x_min, family.box.x_max, family.box.y_min, family.box.y_max})},
                 {"grid_resolution", contour.grid_resolution},
                 {"segments", contour.segments.size()},
                 {"dropped_points", contour.dropped_points},
                 {"singular_points", singular_json(singular)}};
  if (model.params.contains("column")) {
    const double x = get_real(model.params, "column", 0.0);
    std::vector<double> ys;
    const int samples_y = std::max(resolution, 16) * 8;
    for (int i = 0; i <= samples_y; ++i) ys.push_back(family.box.y_min + (family.box.y_max - family.box.y_min) * i / samples_y);
    report["column"] = x;
    report["column_crossings"] = crossings_along_y(family, x, ys);
  }
  if (opt.out.empty()) {
    report["samples"] = samples;
  } else {
    std::ofstream file(opt.out);
    if (!file) throw InputError("cannot write " + opt.out);
    file << "# x y abs_discriminant segment\n" << rows.str();
    report["contour_file"] = opt.out;
  }
  return report;
}

json intertwiner_json(const IntertwinerReport& r) {
  return {{"eta", to_json(r.eta)},
          {"hermiticity_residual", r.hermiticity_residual},
          {"intertwining_residual", r.intertwining_residual},
          {"min_eigenvalue", r.min_eigenvalue},
          {"positivity", name(r.positivity)},
          {"kernel_dim", r.kernel_dim}};
}

json cmd_metric(const Model& model, const Options&) {
  const json& p = model.params;
  IntertwinerReport r;
  if (model.preset == "nn-defect") {
    const cplx z = get_complex(p, "z", cplx(get_real(p, "detuning", 0.0), get_real(p, "gain", 0.0)));
    r = nn_defect_metric(*model.spec, z);
  } else if (model.preset == "far-impurity") {
    r = far_defect_metric(get_int(p, "n", 5), get_real(p, "detuning", 0.0), get_real(p, "gain", 0.0), get_real(p, "t", 1.0));
  } else {
    if (p.contains("z")) throw InputError("z applies to the nn-defect preset only");
    const std::vector<double> weights(static_cast<std::size_t>(model.spec->n()), 1.0);
    r = general_metric_family(build_matrix(*model.spec), weights);
  }
  json out = {{"command", "metric"}, {"n", model.spec->n()}};
  out.update(intertwiner_json(r));
  return out;
}

Subset parse_subsystem(const json& v, int n) {
  std::vector<int> sites;
  if (v.is_number()) {
    sites.push_back(v.get<int>());
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        sites.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw InputError("subsystem must be a comma-separated site list");
      }
    }
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number_integer()) throw InputError("subsystem sites must be integers");
      sites.push_back(e.get<int>());
    }
  } else {
    throw InputError("subsystem must list sites");
  }
  Subset a = 0;
  for (int i : sites) {
    if (i < 1 || i > n) throw InputError("subsystem site out of range");
    a |= Subset{1} << (i - 1);
  }
  return a;
}

json cmd_locality(const Model& model, const Options&) {
  const json& p = model.params;
  Matrix m;
  const int n = model.spec->n();
  if (model.preset == "far-impurity")
    m = far_defect_metric(n, get_real(p, "detuning", 0.0), get_real(p, "gain", 0.0), get_real(p, "t", 1.0)).eta;
  else if (model.preset == "nn-defect")
    m = nn_defect_metric(*model.spec, get_complex(p, "z", cplx(get_real(p, "detuning", 0.0), get_real(p, "gain", 0.0)))).eta;
  else
    throw InputError("locality supports the far-impurity and nn-defect presets");

  json out = {{"command", "locality"}, {"n", n}};
  if (p.contains("subsystem")) {
    const Subset a = parse_subsystem(p["subsystem"], n);
    const auto r = local_kernel(m, a);
    out["subsystem"] = sites_of(a);
    out["kernel_dim"] = r.kernel_dim;
    out["kernel_basis"] = to_json(r.kernel_basis);
    out["extensively_local"] = extensively_local(m, a);
    return out;
  }
  const std::string mode = p.contains("mode") ? p["mode"].get<std::string>() : "rule";
  if (mode != "rule" && mode != "brute") throw InputError("mode must be 'rule' or 'brute'");
  const bool unit = p.contains("unit_modulus") && p["unit_modulus"].is_boolean() && p["unit_modulus"].get<bool>();
  std::vector<Subset> local;
  if (model.preset == "far-impurity") {
    const FarImpurity fi{n, get_real(p, "detuning", 0.0), get_real(p, "gain", 0.0), get_real(p, "t", 1.0)};
    local = classify_subsystems(fi, mode == "brute" ? LocalityMode::BruteForce : LocalityMode::RuleBased, unit);
  } else {
    for (Subset a : enumerate_subsets(n))
      if (extensively_local(m, a)) local.push_back(a);
  }
  json list = json::array();
  for (Subset a : local) list.push_back(sites_of(a));
  out["mode"] = mode;
  out["unit_modulus"] = unit;
  out["count"] = local.size();
  out["local_subsystems"] = list;
  return out;
}

json cmd_inclusion(const Model& model, const Options&) {
  const Matrix h = build_matrix(*model.spec);
  const auto region_json = [](const std::vector<InclusionRegion>& regions) {
    json out = json::array();
    for (const auto& r : regions) {
      if (const auto* d = std::get_if<Disk>(&r))
        out.push_back({{"center", to_json(d->center)}, {"radius", d->radius}});
      else if (const auto* c = std::get_if<CassiniOval>(&r))
        out.push_back({{"foci", json::array({to_json(c->focus1), to_json(c->focus2)})}, {"product", c->b}});
    }
    return out;
  };
  const auto g = gershgorin(h);
  const auto b = brauer_cassini(h);
  bool inside = true;
  const double slack = 1e-9 * std::max(1.0, h.cwiseAbs().maxCoeff());
  for (const auto& e : eig(h).eigenvalues) inside = inside && union_contains(g, e.value, slack) && union_contains(b, e.value, slack);
  return {{"command", "inclusion"},
          {"n", model.spec->n()},
          {"gershgorin", region_json(g)},
          {"gershgorin_components", gershgorin_components(h)},
          {"brauer_cassini", region_json(b)},
          {"spectrum_enclosed", inside}};
}

json cmd_puiseux(const Model& model, const Options&) {
  const ParamFamily family = family_for(model);
  const json& p = model.params;
  for (const char* key : {"x", "y"})
    if (!p.contains(key)) throw InputError(std::string("puiseux needs the point coordinate '") + key + "'");
  const ParamPoint point{get_real(p, "x", 0.0), get_real(p, "y", 0.0)};
  const ParamPoint dir{get_real(p, "dx", 1.0), get_real(p, "dy", 0.0)};
  const auto fit = puiseux_fit(family, point, dir);
  return {{"command", "puiseux"},
          {"family", family.label},
          {"point", json::array({point.x, point.y})},
          {"direction", json::array({dir.x, dir.y})},
          {"exponent", fit.exponent},
          {"leading_coeff", fit.leading_coeff},
          {"slope", fit.slope}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Hermitian lattice analysis"};
  app.require_subcommand(1, 1);
  Options opt;
  const std::vector<std::string> commands = {"spectrum", "ep-contour", "metric", "locality", "inclusion", "puiseux"};
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c);
    sub->add_option("--model", opt.model_file, "model file");
    sub->add_option("--preset", opt.preset, "named preset");
    sub->add_option("--params", opt.params, "key=value pairs")->expected(1, -1);
    sub->add_option("--tol", opt.tol, "tolerance");
    sub->add_option("--resolution", opt.resolution, "grid resolution");
    sub->add_option("--seed", opt.seed, "seed for randomized sampling");
    sub->add_option("--out", opt.out, "output path");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json report;
  try {
    const Model model = load_model(opt, command);
    if (command == "spectrum") report = cmd_spectrum(model, opt);
    else if (command == "ep-contour") report = cmd_ep_contour(model, opt);
    else if (command == "metric") report = cmd_metric(model, opt);
    else if (command == "locality") report = cmd_locality(model, opt);
    else if (command == "inclusion") report = cmd_inclusion(model, opt);
    else report = cmd_puiseux(model, opt);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "computation error: " << e.what() << '\n';
    return kComputeError;
  }
  report["seed"] = opt.seed;

  const std::string text = report.dump(2) + '\n';
  if (command != "ep-contour" && !opt.out.empty()) {
    std::ofstream file(opt.out);
    if (!file) {
      std::cerr << "input error: cannot write " << opt.out << '\n';
      return kInputError;
    }
    file << text;
  } else {
    std::cout << text;
  }
  return 0;
}
