#include "holder/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "holder/error.hpp"
#include "holder/pressure.hpp"

namespace holder {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& field, const std::string& why) {
  throw Error(ErrorKind::malformed_config, "config field '" + field + "': " + why);
}

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) malformed(field, "expected a number");
  return j.get<double>();
}

Word parse_word_key(const std::string& key, int alphabet, int depth, const std::string& field) {
  Word w;
  if (key.find(',') != std::string::npos) {
    std::stringstream ss(key);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
        malformed(field, "word key '" + key + "' is not a list of indices");
      }
      w.push_back(std::stoi(part));
    }
  } else {
    for (char c : key) {
      if (c < '0' || c > '9') malformed(field, "word key '" + key + "' is not a digit string");
      w.push_back(c - '0');
    }
  }
  if (static_cast<int>(w.size()) != depth) {
    malformed(field, "word key '" + key + "' does not have length " + std::to_string(depth));
  }
  for (Symbol s : w) {
    if (s < 0 || s >= alphabet) malformed(field, "word key '" + key + "' uses an unknown symbol");
  }
  return w;
}

}  // namespace

LocallyConstantPotential potential_from_json(const json& j, int alphabet) {
  if (!j.is_object()) malformed("potential", "expected an object");
  if (!j.contains("depth")) malformed("potential.depth", "missing");
  if (!j["depth"].is_number_integer() || j["depth"].get<int>() < 1) {
    malformed("potential.depth", "expected an integer >= 1");
  }
  const int depth = j["depth"].get<int>();
  if (!j.contains("values") || !j["values"].is_object()) {
    malformed("potential.values", "expected an object keyed by words");
  }
  std::size_t size = 1;
  for (int i = 0; i < depth; ++i) size *= static_cast<std::size_t>(alphabet);
  std::vector<double> values(size, std::nan(""));
  std::vector<char> seen(size, 0);
  for (const auto& [key, value] : j["values"].items()) {
    const std::string field = "potential.values." + key;
    const Word w = parse_word_key(key, alphabet, depth, field);
    std::size_t idx = 0;
    for (Symbol s : w) idx = idx * static_cast<std::size_t>(alphabet) + static_cast<std::size_t>(s);
    if (seen[idx]) malformed(field, "duplicate word");
    seen[idx] = 1;
    values[idx] = number_at(value, field);
  }
  for (std::size_t i = 0; i < size; ++i) {
    if (!seen[i]) {
      malformed("potential.values",
                "missing word " + word_to_string(word_at(alphabet, depth, i)));
    }
  }
  return LocallyConstantPotential(alphabet, depth, std::move(values));
}

json potential_to_json(const LocallyConstantPotential& pot) {
  json values = json::object();
  for (std::size_t i = 0; i < pot.table_size(); ++i) {
    const Word w = word_at(pot.alphabet(), pot.depth(), i);
    std::string key;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (pot.alphabet() > 10 && k > 0) key += ',';
      key += std::to_string(w[k]);
    }
    values[key] = pot.value(i);
  }
  return json{{"depth", pot.depth()}, {"values", values}};
}

SystemConfig parse_system_config(const json& j) {
  if (!j.is_object()) malformed("<root>", "expected a JSON object");
  SystemConfig cfg;
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_array() || s.size() != 2) malformed("seed", "expected [lo, hi]");
    cfg.seed = {number_at(s[0], "seed[0]"), number_at(s[1], "seed[1]")};
  }
  if (!j.contains("maps")) malformed("maps", "missing");
  if (!j["maps"].is_array() || j["maps"].empty()) malformed("maps", "expected a non-empty array");
  for (std::size_t i = 0; i < j["maps"].size(); ++i) {
    const json& m = j["maps"][i];
    const std::string field = "maps[" + std::to_string(i) + "]";
    if (!m.is_object()) malformed(field, "expected {\"a\":ratio, \"b\":offset}");
    if (!m.contains("a")) malformed(field + ".a", "missing");
    if (!m.contains("b")) malformed(field + ".b", "missing");
    cfg.maps.push_back({number_at(m["a"], field + ".a"), number_at(m["b"], field + ".b")});
  }
  const int alphabet = static_cast<int>(cfg.maps.size());
  if (j.contains("weights") && j.contains("potential")) {
    malformed("weights", "give either weights or potential, not both");
  }
  if (j.contains("weights")) {
    const json& w = j["weights"];
    if (!w.is_array()) malformed("weights", "expected an array");
    if (static_cast<int>(w.size()) != alphabet) {
      malformed("weights", "expected " + std::to_string(alphabet) + " entries");
    }
    std::vector<double> weights;
    for (std::size_t i = 0; i < w.size(); ++i) {
      weights.push_back(number_at(w[i], "weights[" + std::to_string(i) + "]"));
    }
    cfg.weights = weights;
  } else if (j.contains("potential")) {
    cfg.potential = potential_from_json(j["potential"], alphabet);
  } else {
    malformed("weights", "missing (or give potential)");
  }
  return cfg;
}

SystemConfig load_system_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::malformed_config, "cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::malformed_config, std::string("config is not valid JSON: ") + e.what());
  }
  return parse_system_config(j);
}

json system_config_to_json(const SystemConfig& cfg) {
  json j;
  j["seed"] = {cfg.seed.lo, cfg.seed.hi};
  j["maps"] = json::array();
  for (const auto& m : cfg.maps) j["maps"].push_back({{"a", m.ratio}, {"b", m.offset}});
  if (cfg.weights) j["weights"] = *cfg.weights;
  if (cfg.potential) j["potential"] = potential_to_json(*cfg.potential);
  return j;
}

BuiltSystem build_system(const SystemConfig& cfg, const SolverConfig& solver) {
  Ifs ifs = Ifs::affine(cfg.maps, cfg.seed);
  std::vector<std::string> warnings;
  LocallyConstantPotential psi = cfg.weights ? bernoulli_potential(*cfg.weights) : *cfg.potential;
  if (!cfg.weights) {
    NormalizeOutcome norm = normalize(psi, pressure(psi));
    if (norm.warning) warnings.push_back(*norm.warning);
    psi = norm.potential;
  }
  LocallyConstantPotential phi = geometric_potential(ifs, psi.depth());
  ThermoSystem thermo(std::move(phi), std::move(psi), solver);
  return BuiltSystem{std::move(ifs), std::move(thermo), std::move(warnings)};
}

json number_or_null(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

namespace {

double number_or_marker(const json& j, const char* key, double marker) {
  if (!j.contains(key)) malformed(key, "missing");
  if (j[key].is_null()) return marker;
  return number_at(j[key], key);
}

}  // namespace

json report_to_json(const DimensionReport& r) {
  json j;
  j["alpha"] = r.alpha;
  j["delta"] = r.delta;
  j["inversion"] = to_string(r.inversion);
  j["q0"] = number_or_null(r.q0);
  j["t0"] = number_or_null(r.t0);
  j["v0"] = number_or_null(r.v0);
  j["v1"] = number_or_null(r.v1);
  j["vbar"] = number_or_null(r.vbar);
  j["H_alpha"] = number_or_null(r.spectrum);
  j["dim_S0"] = number_or_null(r.dim_s0);
  j["dim_Sinf"] = number_or_null(r.dim_sinf);
  j["dim_S"] = r.dim_s;
  j["dim_S_scan"] = r.dim_s_scan;
  j["dim_S_closed"] = r.dim_s_closed;
  j["regime"] = to_string(r.regime);
  j["level_set_case"] = to_string(r.level_set_case);
  j["warnings"] = r.warnings;
  return j;
}

DimensionReport report_from_json(const json& j) {
  if (!j.is_object()) malformed("<report>", "expected a JSON object");
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  DimensionReport r;
  r.alpha = number_or_marker(j, "alpha", std::nan(""));
  r.delta = number_or_marker(j, "delta", std::nan(""));
  r.q0 = number_or_marker(j, "q0", kNegInf);
  r.t0 = r.q0;
  r.v0 = number_or_marker(j, "v0", kNegInf);
  r.v1 = number_or_marker(j, "v1", kNegInf);
  r.vbar = number_or_marker(j, "vbar", kNegInf);
  r.spectrum = number_or_marker(j, "H_alpha", std::nan(""));
  r.dim_s0 = number_or_marker(j, "dim_S0", std::nan(""));
  r.dim_sinf = number_or_marker(j, "dim_Sinf", std::nan(""));
  r.dim_s = number_or_marker(j, "dim_S", std::nan(""));
  if (!j.contains("regime") || !j["regime"].is_string()) malformed("regime", "expected a string");
  const auto regime = parse_regime(j["regime"].get<std::string>());
  if (!regime) malformed("regime", "unknown label " + j["regime"].get<std::string>());
  r.regime = *regime;
  return r;
}

json witness_to_json(const WitnessCoding& w) {
  json j;
  j["alpha"] = w.alpha;
  j["block_symbol"] = w.block_symbol;
  j["q1"] = w.q1;
  j["gamma_q1"] = w.gamma_q1;
  j["slope"] = w.slope;
  j["plan"] = {{"n", w.plan.n}, {"M", w.plan.words}, {"m", w.plan.zeros}, {"N", w.plan.target}};
  j["filler_end"] = w.filler_end;
  j["log_diagnostic"] = w.log_diagnostic;
  j["band"] = number_or_null(w.band);
  json runs = json::array();
  for (const auto& [s, n] : run_length_encode(w.prefix)) runs.push_back({s, n});
  j["prefix_rle"] = runs;
  j["prefix_length"] = w.prefix.size();
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace holder
