#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace secx {

// Structurally invalid input: bad typing, dangling references, duplicate IDs,
// unparsable text. `line` is 0 when the error does not come from a file.
class MalformedInput : public std::runtime_error {
 public:
  explicit MalformedInput(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A well-formed input that violates an operation's precondition, e.g. two
// parents that do not share a problem graph.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A replayed or forced decision that does not fit the decision site.
class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace secx
