#pragma once

#include <stdexcept>
#include <string>

namespace summeval {

// Base error for everything the toolkit raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration: missing paths, invalid parameters, malformed config files.
// The CLI maps these to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

// Bad data: malformed corpus lines, duplicate ids, dangling references.
// The CLI maps these to exit code 1.
struct DataError : Error {
  using Error::Error;
};

}  // namespace summeval
