#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fractline {

/// Thrown when a statistical routine is handed fewer observations than it
/// needs (tail too small for an MLE, too few distinct candidates, ...).
class insufficient_data_error : public std::runtime_error {
 public:
  explicit insufficient_data_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a generator would exceed its vertex-count guard.
class size_limit_error : public std::runtime_error {
 public:
  explicit size_limit_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. `line`/`column` are 1-based where known, 0 otherwise;
/// `byte` is the offset reported by the underlying parser when available.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t line = 0, std::size_t column = 0,
              std::size_t byte = 0)
      : std::runtime_error(format(msg, line, column, byte)),
        line_(line),
        column_(column),
        byte_(byte) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  std::size_t byte() const { return byte_; }

 private:
  static std::string format(const std::string& msg, std::size_t line, std::size_t column,
                            std::size_t byte) {
    std::string out = msg;
    if (line > 0) {
      out += " (line " + std::to_string(line);
      if (column > 0) out += ", column " + std::to_string(column);
      out += ")";
    } else if (byte > 0) {
      out += " (byte " + std::to_string(byte) + ")";
    }
    return out;
  }

  std::size_t line_;
  std::size_t column_;
  std::size_t byte_;
};

/// Unreadable input or unwritable output path.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fractline
