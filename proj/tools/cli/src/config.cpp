#include "aitlab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace aitlab::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  int line = 0;
  std::map<std::string, Entry> keys;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"grid", {"horizon", "n_steps"}},
      {"mc", {"n_paths", "seed", "pi_max"}},
      {"model", {"kind", "kappa", "theta", "eta", "v0", "a", "b", "xi", "r0"}},
      {"curve.mu", {"constant", "knots"}},
      {"curve.rho", {"constant", "knots"}},
      {"curve.sigma", {"constant", "knots", "floor"}},
      {"curve.kappa", {"constant", "knots"}},
      {"strategy", {"strategy", "d_stock", "d_rate"}},
      {"insider", {"kind"}},
      {"temporal", {"tol"}},
      {"sweep", {"axis", "min", "max", "count", "fixed", "sigmas"}},
      {"output", {"csv", "svg"}},
  };
  return k;
}

// Model parameters and curves each kind needs; anything else under [model] or
// [curve.*] is an error so the canonical form is unique.
struct KindSpec {
  std::vector<std::string> params;
  std::vector<std::string> curves;
};

const std::map<std::string, KindSpec>& kind_specs() {
  static const std::map<std::string, KindSpec> k = {
      {"bsm", {{}, {"mu", "rho", "sigma"}}},
      {"heston", {{"kappa", "theta", "eta", "v0"}, {"mu", "rho"}}},
      {"vasicek", {{"a", "b", "xi", "r0"}, {"mu", "sigma"}}},
      {"hull_white", {{"a", "theta", "r0"}, {"mu", "sigma", "kappa"}}},
      {"cir", {{"a", "b", "theta", "r0"}, {"mu", "sigma"}}},
  };
  return k;
}

class Parser {
 public:
  Parser(const std::string& text, std::string origin) : origin_(std::move(origin)) { read(text); }

  ExperimentConfig build();

 private:
  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + msg);
  }

  void read(const std::string& text);

  const Entry* find(const std::string& sec, const std::string& key) const {
    auto s = sections_.find(sec);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.keys.find(key);
    return k == s->second.keys.end() ? nullptr : &k->second;
  }
  int section_line(const std::string& sec) const {
    auto s = sections_.find(sec);
    return s == sections_.end() ? 0 : s->second.line;
  }

  double number(const Entry& e, const std::string& key) const {
    return parse_number(e.value, e.line, key);
  }
  double parse_number(const std::string& text, int line, const std::string& what) const {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail(line, what + ": '" + text + "' is not a finite number");
    return v;
  }
  std::int64_t integer(const Entry& e, const std::string& key) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size()) {
      fail(e.line, key + ": '" + e.value + "' is not an integer");
    }
    return v;
  }
  std::vector<double> number_list(const Entry& e, const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(trim(item), e.line, key));
    if (out.empty()) fail(e.line, key + ": empty list");
    return out;
  }

  double get(const std::string& sec, const std::string& key, double fallback) const {
    const Entry* e = find(sec, key);
    return e ? number(*e, key) : fallback;
  }
  double require(const std::string& sec, const std::string& key, int ref_line) const {
    const Entry* e = find(sec, key);
    if (!e) fail(ref_line, "[" + sec + "] is missing required key '" + key + "'");
    return number(*e, key);
  }

  CurveSpec curve(const std::string& name, double horizon) const;

  std::string origin_;
  std::map<std::string, Section> sections_;
};

void Parser::read(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::string current;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    const std::string s = trim(std::string_view(raw).substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
      current = trim(std::string_view(s).substr(1, s.size() - 2));
      if (!known_keys().count(current)) fail(line, "unknown section [" + current + "]");
      if (sections_.count(current)) fail(line, "duplicate section [" + current + "]");
      sections_[current].line = line;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
    if (current.empty()) fail(line, "key outside of any section");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    if (!known_keys().at(current).count(key)) fail(line, "unknown key '" + key + "' in [" + current + "]");
    if (value.empty()) fail(line, "empty value for '" + key + "'");
    auto& sec = sections_[current];
    if (sec.keys.count(key)) fail(line, "duplicate key '" + key + "' in [" + current + "]");
    sec.keys[key] = Entry{value, line};
  }
}

CurveSpec Parser::curve(const std::string& name, double horizon) const {
  const std::string sec = "curve." + name;
  const int line = section_line(sec);
  const Entry* c = find(sec, "constant");
  const Entry* k = find(sec, "knots");
  if ((c != nullptr) == (k != nullptr)) fail(line, "[" + sec + "] needs exactly one of 'constant' or 'knots'");
  CurveSpec out;
  if (c) {
    out.curve = Curve::constant(number(*c, "constant"));
  } else {
    // knots = (t0, v0), (t1, v1), ...
    std::vector<Knot> knots;
    std::string v = k->value;
    std::size_t pos = 0;
    while (pos < v.size()) {
      const auto open = v.find('(', pos);
      if (open == std::string::npos) {
        if (!trim(std::string_view(v).substr(pos)).empty()) fail(k->line, "knots: trailing text");
        break;
      }
      if (!trim(std::string_view(v).substr(pos, open - pos)).empty() &&
          trim(std::string_view(v).substr(pos, open - pos)) != ",") {
        fail(k->line, "knots: expected '(t, value)' pairs separated by commas");
      }
      const auto close = v.find(')', open);
      if (close == std::string::npos) fail(k->line, "knots: missing ')'");
      const std::string inner = v.substr(open + 1, close - open - 1);
      const auto comma = inner.find(',');
      if (comma == std::string::npos) fail(k->line, "knots: expected '(t, value)'");
      knots.push_back(Knot{parse_number(trim(inner.substr(0, comma)), k->line, "knot time"),
                           parse_number(trim(inner.substr(comma + 1)), k->line, "knot value")});
      pos = close + 1;
    }
    if (knots.size() < 2) fail(k->line, "knots: need at least two knots");
    if (knots.front().t != 0.0) fail(k->line, "knots: first knot must be at t = 0");
    if (std::abs(knots.back().t - horizon) > 1e-12 * horizon) fail(k->line, "knots: last knot must be at t = horizon");
    try {
      out.curve = Curve::piecewise_linear(std::move(knots));
    } catch (const InvalidArgument& e) {
      fail(k->line, e.what());
    }
  }
  if (const Entry* f = find(sec, "floor")) out.floor = number(*f, "floor");
  return out;
}

ExperimentConfig Parser::build() {
  ExperimentConfig cfg;
  cfg.horizon = get("grid", "horizon", cfg.horizon);
  if (const Entry* e = find("grid", "n_steps")) {
    const auto n = integer(*e, "n_steps");
    if (n <= 0 || n > 100'000'000) fail(e->line, "n_steps must be a positive integer");
    cfg.n_steps = static_cast<int>(n);
  }
  try {
    (void)cfg.grid();
  } catch (const InvalidArgument& e) {
    fail(section_line("grid"), e.what());
  }

  if (const Entry* e = find("mc", "n_paths")) {
    cfg.mc.n_paths = integer(*e, "n_paths");
    if (cfg.mc.n_paths <= 0) fail(e->line, "n_paths must be positive");
  }
  if (const Entry* e = find("mc", "seed")) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size()) fail(e->line, "seed must be an unsigned integer");
    cfg.mc.seed = v;
  }
  if (const Entry* e = find("mc", "pi_max")) {
    cfg.mc.pi_max = number(*e, "pi_max");
    if (!(cfg.mc.pi_max > 0.0)) fail(e->line, "pi_max must be positive");
  }

  const int model_line = section_line("model");
  const Entry* kind = find("model", "kind");
  if (!kind) fail(model_line, "[model] kind is required");
  if (!kind_specs().count(kind->value)) {
    fail(kind->line, "unknown model kind '" + kind->value + "' (bsm, heston, vasicek, hull_white, cir)");
  }
  cfg.model_kind = kind->value;
  const KindSpec& spec = kind_specs().at(cfg.model_kind);
  for (const auto& [key, entry] : sections_["model"].keys) {
    if (key != "kind" && std::find(spec.params.begin(), spec.params.end(), key) == spec.params.end()) {
      fail(entry.line, "parameter '" + key + "' is not used by model kind " + cfg.model_kind);
    }
  }
  auto param = [&](const std::string& key) { return require("model", key, model_line); };
  if (cfg.model_kind == "heston") {
    cfg.kappa = param("kappa");
    cfg.theta = param("theta");
    cfg.eta = param("eta");
    cfg.v0 = param("v0");
  } else if (cfg.model_kind == "vasicek") {
    cfg.a = param("a");
    cfg.b = param("b");
    cfg.xi = param("xi");
    cfg.r0 = param("r0");
  } else if (cfg.model_kind == "hull_white") {
    cfg.a = param("a");
    cfg.theta = param("theta");
    cfg.r0 = param("r0");
  } else if (cfg.model_kind == "cir") {
    cfg.a = param("a");
    cfg.b = param("b");
    cfg.theta = param("theta");
    cfg.r0 = param("r0");
  }

  for (const std::string name : {"mu", "rho", "sigma", "kappa"}) {
    const bool wanted = std::find(spec.curves.begin(), spec.curves.end(), name) != spec.curves.end();
    const bool present = sections_.count("curve." + name) > 0;
    if (present && !wanted) fail(section_line("curve." + name), "[curve." + name + "] is not used by model kind " + cfg.model_kind);
    if (!present && wanted) fail(model_line, "model kind " + cfg.model_kind + " needs a [curve." + name + "] section");
    if (!wanted) continue;
    auto c = curve(name, cfg.horizon);
    if (name == "mu") cfg.mu = c;
    if (name == "rho") cfg.rho = c;
    if (name == "sigma") cfg.sigma = c;
    if (name == "kappa") cfg.hw_kappa = c;
  }

  try {
    validate_model(cfg.build_model(), cfg.grid());
  } catch (const InadmissibleModel& e) {
    throw InadmissibleModel(origin_ + ":" + std::to_string(model_line) + ": " + e.what());
  } catch (const InvalidArgument& e) {
    fail(model_line, e.what());
  }

  if (const Entry* e = find("strategy", "strategy")) {
    if (e->value != "merton" && e->value != "ait") fail(e->line, "strategy must be merton or ait");
    cfg.strategy = e->value;
  }
  if (const Entry* e = find("strategy", "d_stock")) cfg.d_stock = number_list(*e, "d_stock");
  cfg.d_rate = get("strategy", "d_rate", cfg.d_rate);
  const int strat_line = section_line("strategy");
  if (cfg.d_rate > 0.0 && !has_short_rate(cfg.build_model())) {
    fail(strat_line, "d_rate > 0 needs a short-rate model, got " + cfg.model_kind);
  }
  for (const auto& d : cfg.delays()) {
    try {
      d.validate(cfg.horizon);
    } catch (const InvalidArgument& e) {
      fail(strat_line, e.what());
    }
  }

  if (const Entry* e = find("insider", "kind")) {
    if (e->value != "terminal_brownian") fail(e->line, "insider kind must be terminal_brownian");
    cfg.insider = e->value;
  }

  if (const Entry* e = find("temporal", "tol")) {
    cfg.tol = number(*e, "tol");
    if (!(cfg.tol > 0.0)) fail(e->line, "tol must be positive");
  }

  if (sections_.count("sweep")) {
    const int line = section_line("sweep");
    SweepSpec s;
    const Entry* axis = find("sweep", "axis");
    if (!axis) fail(line, "[sweep] axis is required");
    if (axis->value == "a") {
      s.axis = SweepAxis::a;
    } else if (axis->value == "xi") {
      s.axis = SweepAxis::xi;
    } else {
      fail(axis->line, "sweep axis must be a or xi");
    }
    s.min = require("sweep", "min", line);
    s.max = require("sweep", "max", line);
    s.fixed = require("sweep", "fixed", line);
    const Entry* count = find("sweep", "count");
    if (!count) fail(line, "[sweep] count is required");
    const auto n = integer(*count, "count");
    if (n <= 0 || n > 1'000'000) fail(count->line, "count must be a positive integer");
    s.count = static_cast<int>(n);
    if (s.max < s.min) fail(line, "sweep range must satisfy min <= max");
    const double lowest = s.axis == SweepAxis::a ? 0.0 : -1.0;
    if (!(s.min > lowest)) fail(line, s.axis == SweepAxis::a ? "sweep over a needs min > 0" : "sweep over xi needs min >= 0");
    if (!(s.fixed > 0.0) && !(s.axis == SweepAxis::a && s.fixed == 0.0)) fail(line, "fixed parameter out of range");
    if (const Entry* e = find("sweep", "sigmas")) {
      s.sigmas = number_list(*e, "sigmas");
      for (double v : s.sigmas) {
        if (!(v > 0.0)) fail(e->line, "sigmas must be positive");
      }
    }
    cfg.sweep = s;
  }

  if (const Entry* e = find("output", "csv")) cfg.csv = e->value;
  if (const Entry* e = find("output", "svg")) cfg.svg = e->value;
  return cfg;
}

void write_curve(std::ostringstream& os, const std::string& name, const CurveSpec& c) {
  os << "\n[curve." << name << "]\n";
  if (c.curve.is_constant()) {
    os << "constant = " << fmt(c.curve.constant_value()) << '\n';
  } else {
    os << "knots = ";
    const auto& k = c.curve.knots();
    for (std::size_t i = 0; i < k.size(); ++i) os << (i ? ", " : "") << '(' << fmt(k[i].t) << ", " << fmt(k[i].value) << ')';
    os << '\n';
  }
  if (c.floor) os << "floor = " << fmt(*c.floor) << '\n';
}

}  // namespace

MarketModel ExperimentConfig::build_model() const {
  const double floor = sigma && sigma->floor ? *sigma->floor : 1e-6;
  auto curve_or_zero = [](const std::optional<CurveSpec>& c) { return c ? c->curve : Curve::constant(0.0); };
  if (model_kind == "bsm") return BlackScholesModel{curve_or_zero(mu), curve_or_zero(rho), curve_or_zero(sigma), floor};
  if (model_kind == "heston") return HestonModel{curve_or_zero(mu), curve_or_zero(rho), CIRParams{kappa, theta, eta, v0}};
  if (model_kind == "vasicek") return VasicekModel{curve_or_zero(mu), curve_or_zero(sigma), floor, OUParams{a, b, xi, r0}};
  if (model_kind == "hull_white") {
    return HullWhiteModel{curve_or_zero(mu), curve_or_zero(sigma), floor, HWParams{curve_or_zero(hw_kappa), a, theta, r0}};
  }
  if (model_kind == "cir") return CirRateModel{curve_or_zero(mu), curve_or_zero(sigma), floor, CIRParams{a, b, theta, r0}};
  throw InvalidArgument("unknown model kind '" + model_kind + "'");
}

std::vector<DelaySpec> ExperimentConfig::delays() const {
  std::vector<DelaySpec> out;
  for (double d : d_stock) out.push_back(DelaySpec{d, d_rate});
  return out;
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  return Parser(text, origin).build();
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "[grid]\nhorizon = " << fmt(cfg.horizon) << "\nn_steps = " << cfg.n_steps << '\n';
  os << "\n[mc]\nn_paths = " << cfg.mc.n_paths << "\nseed = " << cfg.mc.seed << "\npi_max = " << fmt(cfg.mc.pi_max)
     << '\n';
  os << "\n[model]\nkind = " << cfg.model_kind << '\n';
  const std::map<std::string, double> values = {{"kappa", cfg.kappa}, {"theta", cfg.theta}, {"eta", cfg.eta},
                                                {"v0", cfg.v0},       {"a", cfg.a},         {"b", cfg.b},
                                                {"xi", cfg.xi},       {"r0", cfg.r0}};
  for (const auto& p : kind_specs().at(cfg.model_kind).params) os << p << " = " << fmt(values.at(p)) << '\n';
  if (cfg.mu) write_curve(os, "mu", *cfg.mu);
  if (cfg.rho) write_curve(os, "rho", *cfg.rho);
  if (cfg.sigma) write_curve(os, "sigma", *cfg.sigma);
  if (cfg.hw_kappa) write_curve(os, "kappa", *cfg.hw_kappa);
  os << "\n[strategy]\nstrategy = " << cfg.strategy << "\nd_stock = ";
  for (std::size_t i = 0; i < cfg.d_stock.size(); ++i) os << (i ? ", " : "") << fmt(cfg.d_stock[i]);
  os << "\nd_rate = " << fmt(cfg.d_rate) << '\n';
  os << "\n[insider]\nkind = " << cfg.insider << '\n';
  os << "\n[temporal]\ntol = " << fmt(cfg.tol) << '\n';
  if (cfg.sweep) {
    const auto& s = *cfg.sweep;
    os << "\n[sweep]\naxis = " << axis_name(s.axis) << "\nmin = " << fmt(s.min) << "\nmax = " << fmt(s.max)
       << "\ncount = " << s.count << "\nfixed = " << fmt(s.fixed) << '\n';
    if (!s.sigmas.empty()) {
      os << "sigmas = ";
      for (std::size_t i = 0; i < s.sigmas.size(); ++i) os << (i ? ", " : "") << fmt(s.sigmas[i]);
      os << '\n';
    }
  }
  if (!cfg.csv.empty() || !cfg.svg.empty()) {
    os << "\n[output]\n";
    if (!cfg.csv.empty()) os << "csv = " << cfg.csv << '\n';
    if (!cfg.svg.empty()) os << "svg = " << cfg.svg << '\n';
  }
  return os.str();
}

}  // namespace aitlab::cli
