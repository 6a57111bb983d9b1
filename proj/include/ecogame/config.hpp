#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ecogame/scenario.hpp"

namespace ecogame {

/// Configuration problem tied to a key and, for file input, a line number
/// (0 for `--set` overrides and for keys that are missing altogether).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, int line, std::string key,
              const std::string& message);

  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& key() const { return key_; }

 private:
  std::string source_;
  int line_;
  std::string key_;
};

/// Parses the flat `key = value` format. Each override is "KEY=VALUE" and
/// replaces (or supplies) the file's entry before validation.
Scenario parse_config(std::string_view text,
                      std::string_view source = "<config>",
                      std::span<const std::string> overrides = {});

Scenario load_config(const std::filesystem::path& path,
                     std::span<const std::string> overrides = {});

/// Canonical text for a scenario; parse_config(to_config_text(s)) == s.
std::string to_config_text(const Scenario& scenario);

/// Commented preset file shipped for "hawk-dove" and "prisoners-dilemma".
std::string preset_config_text(std::string_view name);

}  // namespace ecogame
