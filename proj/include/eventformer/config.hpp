#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace eventformer {

// Flat `key = value` configuration with `#` comments. Unknown keys are
// rejected; every command writes its fully resolved configuration next to
// its outputs so a run can be reproduced from the artifact alone.
class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig from_file(const std::string& path);
  static const std::vector<std::string>& known_keys();

  bool has(const std::string& key) const;
  void set(const std::string& key, const std::string& value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  uint64_t get_u64(const std::string& key, uint64_t fallback) const;
  std::vector<double> get_double_list(const std::string& key,
                                      std::vector<double> fallback) const;
  std::vector<int> get_int_list(const std::string& key,
                                std::vector<int> fallback) const;

  // Seed precedence: explicit value, then the EVENTFORMER_SEED environment
  // variable, then `fallback`.
  uint64_t resolve_seed(std::optional<uint64_t> cli_value,
                        uint64_t fallback = 0) const;

  // Canonical serialization: sorted `key = value` lines.
  std::string serialize() const;
  void write(const std::string& path) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::string format_double(double v);  // shortest round-trip decimal

}  // namespace eventformer
