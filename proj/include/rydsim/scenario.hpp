#pragma once

#include <map>
#include <string>
#include <vector>

namespace rydsim {

// Parsed scenario configuration.  Two input encodings share one key space:
//   * sectioned key-value text:   [drive]\n delta_mhz = 4
//   * JSON:                       {"drive": {"delta_mhz": 4}}
// Values are kept as strings with their source location so validation errors
// can point at the offending line/field.
struct ScenarioConfig {
  struct Entry {
    std::string value;
    int line = 0;  // 0 = unknown (JSON input)
  };

  std::string source;  // file path, used in diagnostics
  std::map<std::string, std::map<std::string, Entry>> sections;

  bool has(const std::string& section, const std::string& key) const;
  // Required accessors throw ValidationError naming the missing/invalid field.
  std::string text(const std::string& section, const std::string& key) const;
  std::string text_or(const std::string& section, const std::string& key, const std::string& fallback) const;
  double number(const std::string& section, const std::string& key) const;
  double number_or(const std::string& section, const std::string& key, double fallback) const;
  long integer_or(const std::string& section, const std::string& key, long fallback) const;

  std::string protocol() const;  // [scenario] protocol, validated against the known set
};

// Parse from a file; JSON is detected by a leading '{', anything else is
// treated as sectioned key-value text.
ScenarioConfig parse_config_file(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text, const std::string& source_name);
ScenarioConfig parse_config_json(const std::string& text, const std::string& source_name);

extern const std::vector<std::string> kKnownProtocols;

}  // namespace rydsim
