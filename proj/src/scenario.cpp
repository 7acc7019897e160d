#include "rydsim/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rydsim/errors.hpp"

namespace rydsim {

const std::vector<std::string> kKnownProtocols = {
    "orir-two-level", "method1", "method2", "method2-microwave",
    "gate-step2",     "gate-sweep", "gate-timing", "geometry"};

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail_at(const std::string& source, int line, const std::string& message) {
  std::string where = source;
  if (line > 0) where += ":" + std::to_string(line);
  throw ValidationError(where + ": " + message);
}

}  // namespace

bool ScenarioConfig::has(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  return s != sections.end() && s->second.count(key) > 0;
}

std::string ScenarioConfig::text(const std::string& section, const std::string& key) const {
  const auto s = sections.find(section);
  if (s == sections.end() || !s->second.count(key))
    throw ValidationError(source + ": missing required field [" + section + "] " + key);
  return s->second.at(key).value;
}

std::string ScenarioConfig::text_or(const std::string& section, const std::string& key,
                                    const std::string& fallback) const {
  return has(section, key) ? sections.at(section).at(key).value : fallback;
}

double ScenarioConfig::number(const std::string& section, const std::string& key) const {
  const auto& entry_owner = sections.find(section);
  if (entry_owner == sections.end() || !entry_owner->second.count(key))
    throw ValidationError(source + ": missing required field [" + section + "] " + key);
  const auto& entry = entry_owner->second.at(key);
  try {
    std::size_t used = 0;
    const double v = std::stod(entry.value, &used);
    if (used != entry.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at(source, entry.line, "[" + section + "] " + key + ": not a number '" + entry.value + "'");
  }
}

double ScenarioConfig::number_or(const std::string& section, const std::string& key, double fallback) const {
  return has(section, key) ? number(section, key) : fallback;
}

long ScenarioConfig::integer_or(const std::string& section, const std::string& key, long fallback) const {
  if (!has(section, key)) return fallback;
  const auto& entry = sections.at(section).at(key);
  try {
    std::size_t used = 0;
    const long v = std::stol(entry.value, &used);
    if (used != entry.value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at(source, entry.line, "[" + section + "] " + key + ": not an integer '" + entry.value + "'");
  }
}

std::string ScenarioConfig::protocol() const {
  const auto p = text("scenario", "protocol");
  if (std::find(kKnownProtocols.begin(), kKnownProtocols.end(), p) == kKnownProtocols.end()) {
    std::string known;
    for (const auto& k : kKnownProtocols) known += (known.empty() ? "" : "|") + k;
    throw ValidationError(source + ": unknown protocol '" + p + "' (expected " + known + ")");
  }
  return p;
}

ScenarioConfig parse_config_text(const std::string& text, const std::string& source_name) {
  ScenarioConfig cfg;
  cfg.source = source_name;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail_at(source_name, lineno, "unterminated section header '" + t + "'");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) fail_at(source_name, lineno, "empty section name");
      cfg.sections[section];  // record even if empty
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail_at(source_name, lineno, "expected 'key = value', got '" + t + "'");
    if (section.empty()) fail_at(source_name, lineno, "key outside any [section]");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) fail_at(source_name, lineno, "empty key");
    if (cfg.sections[section].count(key))
      fail_at(source_name, lineno, "duplicate key [" + section + "] " + key);
    cfg.sections[section][key] = {value, lineno};
  }
  return cfg;
}

ScenarioConfig parse_config_json(const std::string& text, const std::string& source_name) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(source_name + ": JSON parse error: " + e.what());
  }
  if (!j.is_object()) throw ValidationError(source_name + ": top level must be an object of sections");
  ScenarioConfig cfg;
  cfg.source = source_name;
  for (const auto& [section, body] : j.items()) {
    if (!body.is_object())
      throw ValidationError(source_name + ": section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      std::string text_value;
      if (value.is_string())
        text_value = value.get<std::string>();
      else if (value.is_number() || value.is_boolean())
        text_value = value.dump();
      else
        throw ValidationError(source_name + ": [" + section + "] " + key + ": unsupported value type");
      cfg.sections[section][key] = {text_value, 0};
    }
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_config_json(text, path);
  return parse_config_text(text, path);
}

}  // namespace rydsim
