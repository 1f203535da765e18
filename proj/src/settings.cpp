#include "bayestrust/settings.hpp"

#include <fstream>
#include <sstream>

#include "bayestrust/simulator.hpp"
#include "bayestrust/text.hpp"

namespace bayestrust {

using sim::ConfigurationError;

std::pair<std::string, std::string> Settings::parse_assignment(std::string_view line) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigurationError("expected key=value, got '" + std::string(line) + "'");
  }
  const auto key = text::trim(line.substr(0, eq));
  if (key.empty()) throw ConfigurationError("empty key in '" + std::string(line) + "'");
  return {std::string(key), std::string(text::trim(line.substr(eq + 1)))};
}

Settings Settings::parse(std::string_view content, const std::string& origin) {
  Settings out;
  std::size_t line_no = 0;
  for (auto raw : text::split(content, '\n')) {
    ++line_no;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::pair<std::string, std::string> kv;
    try {
      kv = parse_assignment(line);
    } catch (const ConfigurationError& e) {
      throw ConfigurationError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (out.contains(kv.first)) {
      throw ConfigurationError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + kv.first + "'");
    }
    out.values_.emplace(std::move(kv));
  }
  return out;
}

Settings Settings::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void Settings::set(const std::string& key, std::string value) { values_[key] = std::move(value); }

void Settings::merge(const Settings& higher) {
  for (const auto& [k, v] : higher.values_) values_[k] = v;
}

std::optional<std::string> Settings::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Settings::text(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double Settings::real(const std::string& key, double fallback) const {
  return optional_real(key).value_or(fallback);
}

std::optional<double> Settings::optional_real(const std::string& key) const {
  const auto raw = get(key);
  if (!raw) return std::nullopt;
  const auto v = text::parse_real(*raw);
  if (!v) throw ConfigurationError("key '" + key + "': '" + *raw + "' is not a number");
  return v;
}

std::uint64_t Settings::integer(const std::string& key, std::uint64_t fallback) const {
  const auto raw = get(key);
  if (!raw) return fallback;
  const auto v = text::parse_u64(*raw);
  if (!v) throw ConfigurationError("key '" + key + "': '" + *raw + "' is not a non-negative integer");
  return *v;
}

std::vector<double> Settings::reals(const std::string& key) const {
  std::vector<double> out;
  const auto raw = get(key);
  if (!raw) return out;
  for (auto part : text::split(*raw, ':')) {
    const auto v = text::parse_real(text::trim(part));
    if (!v) throw ConfigurationError("key '" + key + "': '" + *raw + "' is not a ':'-separated list of numbers");
    out.push_back(*v);
  }
  return out;
}

std::map<std::string, std::string> Settings::with_prefix(const std::string& prefix) const {
  std::map<std::string, std::string> out;
  for (auto it = values_.lower_bound(prefix); it != values_.end() && it->first.starts_with(prefix); ++it) {
    out.emplace(it->first.substr(prefix.size()), it->second);
  }
  return out;
}

}  // namespace bayestrust
