#include "scfsim/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "scfsim/rng.hpp"

namespace scfsim {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) a++;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) b--;
  return s.substr(a, b - a);
}

double parse_number(const std::string& key, const std::string& raw) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(raw, &pos);
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected a number, got '" + raw + "'");
  }
  if (pos != raw.size()) {
    throw ConfigError("field '" + key + "': trailing junk in '" + raw + "'");
  }
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    cfg.values_[section.empty() ? key : section + "." + key] = value;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str());
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) != 0;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number(key, it->second);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key,
                                      std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(it->second, &pos, 0);
    if (pos != it->second.size()) throw std::invalid_argument("junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("field '" + key + "': expected an unsigned integer, got '" +
                      it->second + "'");
  }
}

std::uint32_t KeyValueConfig::get_u32(const std::string& key,
                                      std::uint32_t fallback) const {
  const std::uint64_t v = get_u64(key, fallback);
  if (v > 0xFFFFFFFFull) {
    throw ConfigError("field '" + key + "': value too large");
  }
  return static_cast<std::uint32_t>(v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("field '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<double> KeyValueConfig::get_double_list(
    const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& raw = it->second;
  std::vector<double> out;
  if (raw.find(':') != std::string::npos) {
    // start:step:stop, inclusive of stop up to half a step of slack.
    std::istringstream in(raw);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') ||
        !std::getline(in, c)) {
      throw ConfigError("field '" + key + "': expected start:step:stop");
    }
    const double start = parse_number(key, trim(a));
    const double step = parse_number(key, trim(b));
    const double stop = parse_number(key, trim(c));
    if (!(step > 0.0)) {
      throw ConfigError("field '" + key + "': step must be positive");
    }
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    for (int k = 0; k <= count; ++k) out.push_back(start + k * step);
    return out;
  }
  std::istringstream in(raw);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_number(key, item));
  }
  if (out.empty()) {
    throw ConfigError("field '" + key + "': empty list");
  }
  return out;
}

std::string KeyValueConfig::canonical() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << '=' << v << '\n';
  return out.str();
}

std::uint64_t spec_digest(const std::string& canonical_text) {
  // FNV-1a over the bytes, finished with the project mixer.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : canonical_text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return mix64(h);
}

}  // namespace scfsim
