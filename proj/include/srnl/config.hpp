#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace srnl {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sectioned key-value experiment configuration:
//
//   [sampler]
//   eta = 5e-4        # comment
//   steps = 2000
//
// flattens to "sampler.eta", "sampler.steps". Lookups by missing key throw a
// ConfigError naming the key; parse errors name the line.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string get_str(const std::string& key) const;
  std::string get_str_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double_or(const std::string& key, double fallback) const;
  long get_long(const std::string& key) const;
  long get_long_or(const std::string& key, long fallback) const;
  std::uint64_t get_seed_or(const std::string& key, std::uint64_t fallback) const;
  std::vector<double> get_vector(const std::string& key) const;

  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  // section names appearing as "<prefix><name>.<key>", in file order
  std::vector<std::string> subsections(const std::string& prefix) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::string> section_order_;
};

}  // namespace srnl
