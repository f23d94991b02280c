#include "srnl/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace srnl {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      if (std::find(cfg.section_order_.begin(), cfg.section_order_.end(), section) ==
          cfg.section_order_.end())
        cfg.section_order_.push_back(section);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

std::string Config::get_str(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end())
    throw ConfigError("missing required config key '" + key + "'");
  return it->second;
}

std::string Config::get_str_or(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
  const std::string v = get_str(key);
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config key '" + key + "' is not a number: '" + v + "'");
  }
}

double Config::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long Config::get_long(const std::string& key) const {
  const std::string v = get_str(key);
  try {
    size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError("config key '" + key + "' is not an integer: '" + v + "'");
  }
}

long Config::get_long_or(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::uint64_t Config::get_seed_or(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_str(key);
  try {
    size_t pos = 0;
    const std::uint64_t s = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return s;
  } catch (...) {
    throw ConfigError("config key '" + key + "' is not a seed: '" + v + "'");
  }
}

std::vector<double> Config::get_vector(const std::string& key) const {
  const std::string v = get_str(key);
  std::vector<double> out;
  std::stringstream ss(v);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) continue;
    try {
      size_t pos = 0;
      out.push_back(std::stod(cell, &pos));
      if (pos != cell.size()) throw std::invalid_argument("");
    } catch (...) {
      throw ConfigError("config key '" + key + "' has a bad vector entry: '" + cell + "'");
    }
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is an empty vector");
  return out;
}

std::vector<std::string> Config::subsections(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& sec : section_order_)
    if (sec.rfind(prefix, 0) == 0) out.push_back(sec.substr(prefix.size()));
  return out;
}

}  // namespace srnl
