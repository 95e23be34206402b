#pragma once

#include <stdexcept>
#include <string>

namespace ehcr {

/// Raised when an input file (channel trace, sweep config) does not match
/// its schema. Carries the 1-based line number for trace files, 0 when the
/// error is not tied to a line.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  long line() const noexcept { return line_; }

 private:
  long line_ = 0;
};

}  // namespace ehcr
