#pragma once

#include <stdexcept>
#include <string>

namespace lgdc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or out-of-range configuration value; the CLI maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A pipeline stage needs an artifact that an earlier command has not produced.
/// The CLI maps it to exit code 3.
class MissingArtifactError : public Error {
 public:
  using Error::Error;
};

/// Malformed text artifact (graph, dataset, coarsening or checkpoint file).
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace lgdc
