#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapelets {

// Precondition violation on an operation argument.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dataset failed validation; carries the itemized report.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(const std::string& summary, std::vector<std::string> issues)
      : std::runtime_error(summary), issues_(std::move(issues)) {}

  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

// A search legitimately produced nothing (e.g. no candidate above the
// quality threshold). Distinct from a crash so callers can exit cleanly.
class EmptyResult : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file; message carries file and line number.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& file, std::size_t line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  explicit FormatError(const std::string& what) : std::runtime_error(what), line_(0) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace shapelets
