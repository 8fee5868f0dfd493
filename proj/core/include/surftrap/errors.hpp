#pragma once

#include <stdexcept>
#include <string>

namespace surftrap {

// Invalid geometry, drive tables, or other model inputs.  Maps to CLI exit 2.
class layout_error : public std::runtime_error {
public:
  explicit layout_error(const std::string& what) : std::runtime_error(what) {}
};

// Config file rejected; position is 1-based and refers to the offending node.
class config_error : public std::runtime_error {
public:
  config_error(const std::string& file, int line, int column, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + what),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

// An iteration failed to converge or a solution does not exist (no null, no
// saddle, no interior peak, ...).  Maps to CLI exit 3.
class numeric_error : public std::runtime_error {
public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace surftrap
