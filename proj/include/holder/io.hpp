#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "holder/holder_dimension.hpp"
#include "holder/ifs.hpp"
#include "holder/multifractal.hpp"
#include "holder/potential.hpp"
#include "holder/staircase.hpp"

namespace holder {

/// {"seed":[lo,hi], "maps":[{"a":..,"b":..},...]} plus either
/// {"weights":[...]} or {"potential":{"depth":k,"values":{"01":..}}}.
struct SystemConfig {
  Interval seed{0.0, 1.0};
  std::vector<AffineMap> maps;
  std::optional<std::vector<double>> weights;
  std::optional<LocallyConstantPotential> potential;
};

/// Throws malformed_config naming the offending field.
SystemConfig parse_system_config(const nlohmann::json& j);
SystemConfig load_system_config(const std::string& path);
nlohmann::json system_config_to_json(const SystemConfig& cfg);

struct BuiltSystem {
  Ifs ifs;
  ThermoSystem thermo;
  std::vector<std::string> warnings;
};

/// Validates the maps, builds phi at the depth of psi and normalizes a raw
/// potential table (weights are taken as already normalized).
BuiltSystem build_system(const SystemConfig& cfg, const SolverConfig& solver = {});

/// Word keys are digit strings ("01") for alphabets up to 10 symbols and
/// comma-separated indices ("0,1") otherwise; both forms are accepted.
nlohmann::json potential_to_json(const LocallyConstantPotential& pot);
LocallyConstantPotential potential_from_json(const nlohmann::json& j, int alphabet);

/// Non-finite numbers become null.
nlohmann::json number_or_null(double x);
nlohmann::json report_to_json(const DimensionReport& r);
DimensionReport report_from_json(const nlohmann::json& j);
nlohmann::json witness_to_json(const WitnessCoding& w);

/// 12 significant digits; inf, -inf and nan spelled out.
std::string format_number(double x);

}  // namespace holder
