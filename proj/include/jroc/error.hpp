#pragma once

#include <stdexcept>
#include <string>

namespace jroc {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments, malformed configuration or data that violates an invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures (unreadable input, unwritable output).
class IoError : public Error {
 public:
  using Error::Error;
};

enum class DataErrc {
  unreadable_file,
  ragged_row,
  empty_dataset,
  missing_label_column,
  missing_label,
  bad_schema,
};

const char* to_string(DataErrc code) noexcept;

class DataError : public ValidationError {
 public:
  DataError(DataErrc code, const std::string& what)
      : ValidationError(std::string(to_string(code)) + ": " + what), code_(code) {}

  DataErrc code() const noexcept { return code_; }

 private:
  DataErrc code_;
};

}  // namespace jroc
