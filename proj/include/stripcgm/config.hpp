#ifndef STRIPCGM_CONFIG_HPP
#define STRIPCGM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace stripcgm {

// Flat "key = value" text, '#' comments, no nesting.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& def) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int_or(const std::string& key, std::int64_t def) const;
  double get_num(const std::string& key) const;
  double get_num_or(const std::string& key, double def) const;
  std::vector<std::int64_t> get_int_list(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  // Canonical text: sorted keys, one "key = value" per line.
  std::string canonical() const;

 private:
  std::map<std::string, std::string> kv_;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace stripcgm

#endif
