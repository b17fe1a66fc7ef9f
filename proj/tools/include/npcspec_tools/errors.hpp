#pragma once

#include <stdexcept>
#include <string>

namespace npcspec::tools {

enum ExitCode : int {
  exit_ok = 0,
  exit_config = 2,
  exit_io = 3,
  exit_numeric = 4,
  exit_partial = 5,
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace npcspec::tools
