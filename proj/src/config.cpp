#include "eventformer/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eventformer {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys = {
      "seed",
      "family",
      "model",
      "count",
      "in",
      "out",
      "out_dir",
      "train",
      "data",
      "checkpoint",
      "encoder.d_model",
      "encoder.n_blocks",
      "encoder.n_heads",
      "encoder.d_ff",
      "encoder.dropout",
      "encoder.max_len",
      "mask.strategy",
      "mask.fraction",
      "mask.mean_run_length",
      "augment.voids_per_gap",
      "augment.no_void",
      "pretrain.gamma",
      "pretrain.lambda",
      "pretrain.omega",
      "pretrain.batch_size",
      "pretrain.lr",
      "pretrain.max_epochs",
      "pretrain.patience",
      "pretrain.train_fraction",
      "finetune.alpha",
      "finetune.lr_candidates",
      "finetune.batch_size",
      "finetune.max_epochs",
      "finetune.patience",
      "finetune.hidden",
      "finetune.time_target",
      "finetune.train_fraction",
      "finetune.dev_fraction",
  };
  return keys;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  RunConfig cfg;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected `key = value`");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    cfg.set(key, value);
  }
  return cfg;
}

bool RunConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw std::runtime_error("unknown config key '" + key + "'");
  values_[key] = value;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad number '" +
                             it->second + "'");
  }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    int v = std::stoi(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing text");
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad integer '" +
                             it->second + "'");
  }
}

uint64_t RunConfig::get_u64(const std::string& key, uint64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing text");
    return static_cast<uint64_t>(v);
  } catch (const std::exception&) {
    throw std::runtime_error("config key '" + key + "': bad integer '" +
                             it->second + "'");
  }
}

std::vector<double> RunConfig::get_double_list(
    const std::string& key, std::vector<double> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const std::string& item : split_list(it->second)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::runtime_error("config key '" + key + "': bad number '" + item +
                               "'");
    }
  }
  return out;
}

std::vector<int> RunConfig::get_int_list(const std::string& key,
                                         std::vector<int> fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<int> out;
  for (const std::string& item : split_list(it->second)) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::runtime_error("config key '" + key + "': bad integer '" + item +
                               "'");
    }
  }
  return out;
}

uint64_t RunConfig::resolve_seed(std::optional<uint64_t> cli_value,
                                 uint64_t fallback) const {
  if (cli_value) return *cli_value;
  if (has("seed")) return get_u64("seed", fallback);
  if (const char* env = std::getenv("EVENTFORMER_SEED")) {
    try {
      return static_cast<uint64_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw std::runtime_error("EVENTFORMER_SEED is not an integer");
    }
  }
  return fallback;
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " = ";
    out += v;
    out += "\n";
  }
  return out;
}

void RunConfig::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << serialize();
}

}  // namespace eventformer
