#include "stripcgm/config.hpp"

#include <fstream>
#include <sstream>

namespace stripcgm {

namespace {
std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  std::size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}
}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    cfg.kv_[key] = value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string ExperimentConfig::get_or(const std::string& key,
                                     const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

std::int64_t ExperimentConfig::get_int(const std::string& key) const {
  try {
    return std::stoll(get(key));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key " + key + " is not an integer");
  }
}

std::int64_t ExperimentConfig::get_int_or(const std::string& key,
                                          std::int64_t def) const {
  return has(key) ? get_int(key) : def;
}

double ExperimentConfig::get_num(const std::string& key) const {
  try {
    return std::stod(get(key));
  } catch (const std::invalid_argument&) {
    throw ConfigError("config key " + key + " is not a number");
  }
}

double ExperimentConfig::get_num_or(const std::string& key, double def) const {
  return has(key) ? get_num(key) : def;
}

std::vector<std::int64_t> ExperimentConfig::get_int_list(const std::string& key) const {
  std::vector<std::int64_t> out;
  std::istringstream is(get(key));
  std::string cell;
  while (std::getline(is, cell, ',')) {
    try {
      out.push_back(std::stoll(trim(cell)));
    } catch (const std::invalid_argument&) {
      throw ConfigError("config key " + key + " is not an integer list");
    }
  }
  if (out.empty()) throw ConfigError("config key " + key + " is an empty list");
  return out;
}

std::string ExperimentConfig::canonical() const {
  std::string out;
  for (const auto& [k, v] : kv_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace stripcgm
