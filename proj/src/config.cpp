#include "morph/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace morph {

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& text, const std::string& key, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': cannot parse number from '" + t + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& key, int line) {
  const std::string t = trim(text);
  int v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                      "': cannot parse integer from '" + t + "'");
  }
  return v;
}

bool parse_bool(const std::string& text, const std::string& key, int line) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw ConfigError("line " + std::to_string(line) + ": key '" + key +
                    "': expected true or false, got '" + t + "'");
}

std::array<double, 5> parse_vec5(const std::string& text, const std::string& key,
                                 int line) {
  std::vector<std::string> parts;
  std::string cur;
  std::stringstream ss(text);
  while (std::getline(ss, cur, ',')) parts.push_back(cur);
  if (parts.size() != 5) {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "' expects 5 " +
                      "comma-separated values, got " + std::to_string(parts.size()));
  }
  std::array<double, 5> out{};
  for (int i = 0; i < 5; ++i) out[i] = parse_double(parts[i], key, line);
  return out;
}

const std::set<std::string> kNondimKeys = {"b", "c", "p1", "p3", "d"};
const std::set<std::string> kDimensionalKeys = {
    "D",   "Dstar",    "gamma", "gammaStar", "k",         "kPrime",
    "kR",  "kRPrime",  "kRg",   "kRgPrime",  "alpha",     "alphaStar",
    "s",   "GammaProd", "Gconc", "L"};
const std::set<std::string> kControlKeys = {
    "grid_n", "mode",    "dt",      "t_end",      "stride", "tol",
    "max_iter", "damping", "output_dir", "emit_svg", "dimensional"};

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, RawEntry> entries;
  {
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string t = trim(line);
      if (t.empty()) continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": expected 'key = value', got '" + t + "'");
      }
      const std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) {
        throw ConfigError("line " + std::to_string(lineno) + ": empty key");
      }
      if (!kNondimKeys.count(key) && !kDimensionalKeys.count(key) &&
          !kControlKeys.count(key)) {
        throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key +
                          "'");
      }
      if (entries.count(key)) {
        throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                          "' (first on line " + std::to_string(entries[key].line) + ")");
      }
      entries[key] = {value, lineno};
    }
  }

  auto take = [&](const std::string& key) -> const RawEntry* {
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };

  bool dimensional = false;
  if (const RawEntry* e = take("dimensional")) {
    dimensional = parse_bool(e->value, "dimensional", e->line);
  }

  std::optional<Params> params;
  if (dimensional) {
    for (const std::string& key : kNondimKeys) {
      if (entries.count(key)) {
        throw ConfigError("key '" + key + "' conflicts with dimensional = true");
      }
    }
    std::vector<std::string> missing;
    for (const std::string& key : kDimensionalKeys) {
      if (!entries.count(key)) missing.push_back(key);
    }
    if (!missing.empty()) {
      std::string msg = "missing required dimensional keys:";
      for (const auto& k : missing) msg += " " + k;
      throw ConfigError(msg);
    }
    auto num = [&](const std::string& key) {
      const RawEntry& e = entries.at(key);
      return parse_double(e.value, key, e.line);
    };
    DimensionalParameters dp{num("D"),       num("Dstar"),    num("gamma"),
                             num("gammaStar"), num("k"),      num("kPrime"),
                             num("kR"),      num("kRPrime"),  num("kRg"),
                             num("kRgPrime"), num("alpha"),   num("alphaStar"),
                             num("s"),       num("GammaProd"), num("Gconc"),
                             num("L")};
    try {
      params.emplace(nondimensionalize(dp));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  } else {
    std::vector<std::string> missing;
    for (const char* key : {"b", "c", "p1", "p3", "d"}) {
      if (!entries.count(key)) missing.push_back(key);
    }
    if (!missing.empty()) {
      std::string msg = "missing required keys:";
      for (const auto& k : missing) msg += " " + k;
      throw ConfigError(msg);
    }
    const RawEntry& be = entries.at("b");
    const RawEntry& ce = entries.at("c");
    const RawEntry& p1e = entries.at("p1");
    const RawEntry& p3e = entries.at("p3");
    const RawEntry& de = entries.at("d");
    try {
      params.emplace(parse_double(de.value, "d", de.line),
                     parse_vec5(be.value, "b", be.line),
                     parse_vec5(ce.value, "c", ce.line),
                     parse_double(p1e.value, "p1", p1e.line),
                     parse_double(p3e.value, "p3", p3e.line));
    } catch (const std::invalid_argument& err) {
      throw ConfigError(err.what());
    }
  }

  RunConfig cfg{*params, 512, SteadyMode::SingularSplit, 1e-3, 10.0, 100,
                SteadyOptions{}, ".", false};
  if (const RawEntry* e = take("grid_n")) {
    cfg.grid_n = parse_int(e->value, "grid_n", e->line);
    if (cfg.grid_n < 4 || cfg.grid_n % 2 != 0) {
      throw ConfigError("key 'grid_n' must be an even integer >= 4");
    }
  }
  if (const RawEntry* e = take("mode")) {
    const std::string v = trim(e->value);
    if (v == "singular-split") {
      cfg.mode = SteadyMode::SingularSplit;
    } else if (v == "discrete-delta") {
      cfg.mode = SteadyMode::DiscreteDelta;
    } else {
      throw ConfigError("line " + std::to_string(e->line) +
                        ": key 'mode' must be singular-split or discrete-delta");
    }
  }
  if (const RawEntry* e = take("dt")) {
    cfg.dt = parse_double(e->value, "dt", e->line);
    if (!(cfg.dt > 0.0)) throw ConfigError("key 'dt' must be positive");
  }
  if (const RawEntry* e = take("t_end")) {
    cfg.t_end = parse_double(e->value, "t_end", e->line);
    if (!(cfg.t_end > 0.0)) throw ConfigError("key 't_end' must be positive");
  }
  if (const RawEntry* e = take("stride")) {
    cfg.stride = parse_int(e->value, "stride", e->line);
    if (cfg.stride < 1) throw ConfigError("key 'stride' must be >= 1");
  }
  if (const RawEntry* e = take("tol")) {
    cfg.steady.tol = parse_double(e->value, "tol", e->line);
    if (!(cfg.steady.tol > 0.0)) throw ConfigError("key 'tol' must be positive");
  }
  if (const RawEntry* e = take("max_iter")) {
    cfg.steady.max_iter = parse_int(e->value, "max_iter", e->line);
    if (cfg.steady.max_iter < 1) throw ConfigError("key 'max_iter' must be >= 1");
  }
  if (const RawEntry* e = take("damping")) {
    cfg.steady.damping = parse_double(e->value, "damping", e->line);
    if (!(cfg.steady.damping > 0.0) || cfg.steady.damping > 1.0) {
      throw ConfigError("key 'damping' must lie in (0, 1]");
    }
  }
  if (const RawEntry* e = take("output_dir")) cfg.output_dir = trim(e->value);
  if (const RawEntry* e = take("emit_svg")) {
    cfg.emit_svg = parse_bool(e->value, "emit_svg", e->line);
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace morph
