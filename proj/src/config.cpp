#include "lapgrowth/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace lapgrowth {

using nlohmann::json;

namespace {

json as_json(const RunConfig& c) {
  return {{"schema", c.schema},   {"model", c.model},     {"d", c.d},
          {"n", c.n},             {"m", c.m},             {"seed", c.seed},
          {"mechanism", c.mechanism}, {"rotor_init", c.rotor_init}, {"policy", c.policy},
          {"tolerance", c.tolerance}, {"palette", c.palette}, {"out", c.out},
          {"what", c.what},       {"grid", c.grid},       {"R", c.R},
          {"samples", c.samples}, {"burnin", c.burnin},   {"thin", c.thin},
          {"graph", c.graph},     {"op", c.op},           {"reps", c.reps}};
}

template <class T>
void take(const json& j, const char* key, T& field) {
  if (!j.contains(key)) return;
  try {
    field = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config key '") + key + "': " + e.what());
  }
}

const std::set<std::string> kModels{"sandpile", "divisible", "rotor", "idla", "algebra", "estimate"};

}  // namespace

std::string to_json(const RunConfig& c) { return as_json(c).dump(2) + "\n"; }

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  const json known = as_json(RunConfig{});
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  RunConfig c;
  take(j, "schema", c.schema);
  if (c.schema != kConfigSchema) throw std::invalid_argument("unsupported config schema " + std::to_string(c.schema));
  take(j, "model", c.model);
  take(j, "d", c.d);
  take(j, "n", c.n);
  take(j, "m", c.m);
  take(j, "seed", c.seed);
  take(j, "mechanism", c.mechanism);
  take(j, "rotor_init", c.rotor_init);
  take(j, "policy", c.policy);
  take(j, "tolerance", c.tolerance);
  take(j, "palette", c.palette);
  take(j, "out", c.out);
  take(j, "what", c.what);
  take(j, "grid", c.grid);
  take(j, "R", c.R);
  take(j, "samples", c.samples);
  take(j, "burnin", c.burnin);
  take(j, "thin", c.thin);
  take(j, "graph", c.graph);
  take(j, "op", c.op);
  take(j, "reps", c.reps);
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const RunConfig& c, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << to_json(c);
}

void validate(const RunConfig& c) {
  auto bad = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (!kModels.contains(c.model)) bad("unknown model '" + c.model + "'");
  if (c.d < 1 || c.d > kMaxDim) bad("d must be in 1.." + std::to_string(kMaxDim));
  if (c.n < 1) bad("n must be >= 1");
  if (!(c.m > 0)) bad("m must be positive");
  if (c.tolerance < 0) bad("tolerance must be >= 0");
  if (c.palette != "standard") bad("only the 'standard' palette exists");
  if (c.grid < 2) bad("grid must be >= 2");
  if (c.R < 1) bad("R must be >= 1");
  if (c.samples < 2) bad("samples must be >= 2");
  if (c.thin < 1) bad("thin must be >= 1");
  if (c.reps < 1) bad("reps must be >= 1");
  mechanism_of(c);
  rotor_init_of(c);
  policy_of(c);
  const std::set<std::string> whats{"xi", "zeta", "lambda", "tau", "all"};
  if (!whats.contains(c.what)) bad("unknown estimate '" + c.what + "'");
  const std::set<std::string> ops{"identity", "order", "recurrents", "tutte", "unicycles", "laws", "all"};
  if (!ops.contains(c.op)) bad("unknown algebra op '" + c.op + "'");
}

RotorMechanism mechanism_of(const RunConfig& c) {
  if (c.mechanism == "standard") return RotorMechanism::standard(c.d);
  if (c.d != 2) throw std::invalid_argument("config: mechanism '" + c.mechanism + "' needs d = 2");
  if (c.mechanism == "clockwise") return RotorMechanism::clockwise();
  if (c.mechanism == "counterclockwise") return RotorMechanism::counterclockwise();
  throw std::invalid_argument("config: unknown mechanism '" + c.mechanism + "'");
}

RotorInit rotor_init_of(const RunConfig& c) {
  if (c.rotor_init == "random") return RotorInit::random(c.seed);
  if (c.rotor_init == "E") return RotorInit::all(kEast);
  if (c.rotor_init == "W") return RotorInit::all(kWest);
  if (c.d >= 2 && c.rotor_init == "N") return RotorInit::all(kNorth);
  if (c.d >= 2 && c.rotor_init == "S") return RotorInit::all(kSouth);
  throw std::invalid_argument("config: unknown rotor_init '" + c.rotor_init + "'");
}

TopplePolicy policy_of(const RunConfig& c) {
  if (c.policy == "fifo") return TopplePolicy::kFifo;
  if (c.policy == "lifo") return TopplePolicy::kLifo;
  if (c.policy == "random") return TopplePolicy::kRandom;
  if (c.policy == "sweep") return TopplePolicy::kSweep;
  throw std::invalid_argument("config: unknown policy '" + c.policy + "'");
}

std::filesystem::path output_dir(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("LAPGROWTH_OUT"); env && *env) return env;
  return "lapgrowth_out";
}

}  // namespace lapgrowth
