#include "gkdv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gkdv/error.hpp"
#include "gkdv/snapshot.hpp"
#include "json.hpp"

namespace gkdv {

using nlohmann::json;

const char* to_string(InitialData::Kind k) noexcept {
  switch (k) {
    case InitialData::Kind::gaussian:
      return "gaussian";
    case InitialData::Kind::soliton:
      return "soliton";
    case InitialData::Kind::file:
      return "file";
  }
  return "gaussian";
}

StepperConfig RunConfig::stepper() const {
  StepperConfig s;
  s.dt = dt.value_or(0.0);
  s.oversample = oversample;
  s.cfl_safety = cfl_safety;
  s.scheme = scheme;
  return s;
}

CriteriaOptions RunConfig::criteria() const {
  CriteriaOptions o;
  if (kappa) o.kappa = *kappa;
  o.theta = theta;
  o.theta_decay = theta_decay;
  o.decay_tolerance = decay_tolerance;
  o.fit_start = fit_start;
  return o;
}

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(at(key), "expected a number");
    const double d = v->get<double>();
    if (!std::isfinite(d)) throw ConfigError(at(key), "must be finite");
    return d;
  }

  long long integer(const std::string& key, long long fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v->get<long long>();
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(at(key), "expected a string");
    return v->get<std::string>();
  }

  std::optional<Section> child(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Section(*v, at(key));
  }

  void reject_unknown() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

}  // namespace

RunConfig parse_config(const std::string& document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  RunConfig cfg;
  Section root(doc, "");

  if (auto g = root.child("grid")) {
    const long long n = g->integer("n", static_cast<long long>(cfg.n));
    require(n >= 4 && n % 2 == 0, g->at("n"), "must be an even integer >= 4");
    cfg.n = static_cast<std::size_t>(n);
    cfg.length = g->number("L", cfg.length);
    require(cfg.length > 0.0, g->at("L"), "must be positive");
    g->reject_unknown();
  }

  if (auto m = root.child("model")) {
    cfg.model.mu = m->number("mu", cfg.model.mu);
    require(cfg.model.mu != 0.0, m->at("mu"), "must be nonzero");
    cfg.model.alpha = m->number("alpha", cfg.model.alpha);
    require(cfg.model.alpha > 0.0, m->at("alpha"), "must be positive");
    if (!cfg.model.in_theory_range()) {
      cfg.warnings.push_back("model.alpha = " + std::to_string(cfg.model.alpha) +
                             " lies outside the small-data range 8/5 < alpha < 2");
    }
    m->reject_unknown();
  }

  if (auto s = root.child("stepper")) {
    if (const json* dt = s->find("dt")) {
      if (dt->is_string()) {
        require(dt->get<std::string>() == "auto", s->at("dt"), "expected a number or \"auto\"");
      } else {
        require(dt->is_number(), s->at("dt"), "expected a number or \"auto\"");
        const double v = dt->get<double>();
        require(v > 0.0 && std::isfinite(v), s->at("dt"), "must be positive");
        cfg.dt = v;
      }
    }
    cfg.cfl_safety = s->number("cfl_safety", cfg.cfl_safety);
    require(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0, s->at("cfl_safety"), "must lie in (0, 1]");
    const long long over = s->integer("oversample", cfg.oversample);
    require(over >= 1 && over <= 8, s->at("oversample"), "must be an integer in [1, 8]");
    cfg.oversample = static_cast<int>(over);
    const std::string scheme = s->string("scheme", to_string(cfg.scheme));
    require(scheme == "etdrk4" || scheme == "ifrk4", s->at("scheme"), "must be \"etdrk4\" or \"ifrk4\"");
    cfg.scheme = scheme_from_string(scheme);
    s->reject_unknown();
  }

  cfg.horizon = root.number("horizon", cfg.horizon);
  require(cfg.horizon >= 0.0, "horizon", "must be >= 0");

  if (const json* st = root.find("store_stride")) {
    if (st->is_string()) {
      require(st->get<std::string>() == "auto", "store_stride", "expected a positive integer or \"auto\"");
    } else {
      require(st->is_number_integer() && st->get<long long>() >= 1, "store_stride",
              "expected a positive integer or \"auto\"");
      cfg.store_stride = static_cast<std::size_t>(st->get<long long>());
    }
  }

  if (auto d = root.child("initial")) {
    const std::string kind = d->string("kind", "gaussian");
    if (kind == "gaussian") {
      cfg.initial.kind = InitialData::Kind::gaussian;
      cfg.initial.amplitude = d->number("amplitude", cfg.initial.amplitude);
      cfg.initial.center = d->number("center", cfg.initial.center);
      cfg.initial.width = d->number("width", cfg.initial.width);
      require(cfg.initial.width > 0.0, d->at("width"), "must be positive");
    } else if (kind == "soliton") {
      cfg.initial.kind = InitialData::Kind::soliton;
      cfg.initial.speed = d->number("speed", cfg.initial.speed);
      require(cfg.initial.speed > 0.0, d->at("speed"), "must be positive");
    } else if (kind == "file") {
      cfg.initial.kind = InitialData::Kind::file;
      cfg.initial.path = d->string("path", "");
      require(!cfg.initial.path.empty(), d->at("path"), "a snapshot header path is required");
    } else {
      throw ConfigError(d->at("kind"), "unknown initial data kind '" + kind + "'");
    }
    d->reject_unknown();
  }
  if (cfg.initial.kind == InitialData::Kind::soliton) {
    require(cfg.model.mu < 0.0, "model.mu", "soliton data needs the focusing sign mu < 0");
  }

  if (auto d = root.child("diagnostics")) {
    cfg.diagnostics.vector_fields = d->boolean("vector_fields", cfg.diagnostics.vector_fields);
    cfg.diagnostics.residuals = d->boolean("residuals", cfg.diagnostics.residuals);
    d->reject_unknown();
  }

  if (const json* k = root.find("kappa")) {
    if (!k->is_null()) {
      require(k->is_number(), "kappa", "expected a number or null");
      cfg.kappa = k->get<double>();
    }
  }

  if (auto c = root.child("criteria")) {
    cfg.theta = c->number("theta", cfg.theta);
    require(cfg.theta >= 1.0, c->at("theta"), "must be >= 1");
    cfg.theta_decay = c->number("theta_decay", cfg.theta_decay);
    require(cfg.theta_decay >= 1.0, c->at("theta_decay"), "must be >= 1");
    cfg.decay_tolerance = c->number("decay_tolerance", cfg.decay_tolerance);
    require(cfg.decay_tolerance > 0.0, c->at("decay_tolerance"), "must be positive");
    cfg.fit_start = c->number("fit_start", cfg.fit_start);
    require(cfg.fit_start >= 1.0, c->at("fit_start"), "must be >= 1");
    c->reject_unknown();
  }

  if (const json* s = root.find("seed")) {
    require(s->is_number_unsigned() || (s->is_number_integer() && s->get<long long>() >= 0), "seed",
            "expected a non-negative integer");
    cfg.seed = s->get<std::uint64_t>();
  }
  cfg.output = root.string("output", cfg.output);
  require(!cfg.output.empty(), "output", "must not be empty");

  root.reject_unknown();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["grid"] = {{"n", cfg.n}, {"L", cfg.length}};
  j["model"] = {{"mu", cfg.model.mu}, {"alpha", cfg.model.alpha}};
  j["stepper"] = {{"dt", cfg.dt ? json(*cfg.dt) : json("auto")},
                  {"cfl_safety", cfg.cfl_safety},
                  {"oversample", cfg.oversample},
                  {"scheme", to_string(cfg.scheme)}};
  j["horizon"] = cfg.horizon;
  j["store_stride"] = cfg.store_stride ? json(*cfg.store_stride) : json("auto");
  json init = {{"kind", to_string(cfg.initial.kind)}};
  switch (cfg.initial.kind) {
    case InitialData::Kind::gaussian:
      init["amplitude"] = cfg.initial.amplitude;
      init["center"] = cfg.initial.center;
      init["width"] = cfg.initial.width;
      break;
    case InitialData::Kind::soliton:
      init["speed"] = cfg.initial.speed;
      break;
    case InitialData::Kind::file:
      init["path"] = cfg.initial.path;
      break;
  }
  j["initial"] = init;
  j["diagnostics"] = {{"vector_fields", cfg.diagnostics.vector_fields}, {"residuals", cfg.diagnostics.residuals}};
  j["kappa"] = cfg.kappa ? json(*cfg.kappa) : json(nullptr);
  j["criteria"] = {{"theta", cfg.theta},
                   {"theta_decay", cfg.theta_decay},
                   {"decay_tolerance", cfg.decay_tolerance},
                   {"fit_start", cfg.fit_start}};
  j["seed"] = cfg.seed;
  j["output"] = cfg.output;
  return j.dump(2);
}

RealField make_initial_data(const RunConfig& cfg) {
  const GridSpec grid = cfg.grid();
  switch (cfg.initial.kind) {
    case InitialData::Kind::gaussian:
      return make_gaussian(grid, cfg.initial.amplitude, cfg.initial.center, cfg.initial.width);
    case InitialData::Kind::soliton:
      return make_soliton(grid, cfg.initial.speed, cfg.model);
    case InitialData::Kind::file: {
      Snapshot snap = read_snapshot(cfg.initial.path);
      if (!(snap.state.u.grid() == grid)) {
        throw ConfigError("initial.path", "snapshot grid does not match grid.n / grid.L");
      }
      return std::move(snap.state.u);
    }
  }
  throw ConfigError("initial.kind", "unsupported kind");
}

}  // namespace gkdv
