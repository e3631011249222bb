#pragma once

#include <stdexcept>

namespace scnsim {

/// Bad configuration file, key, or parameter combination. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Precondition violation on an operation's inputs.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exhaustive oracle refused an instance that is too large. CLI exit code 3.
struct OracleSizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File system failure with path context. CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scnsim
