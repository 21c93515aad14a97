#pragma once

#include <stdexcept>
#include <string>

namespace spdcsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside its physical domain (eta > 1, negative probability, ...).
struct DomainError : Error {
  using Error::Error;
};

// Photon-number cutoff too small for the requested operation.
struct CutoffError : Error {
  using Error::Error;
};

// Herald pattern has zero probability under the given source/detector model.
struct HeraldError : Error {
  using Error::Error;
};

// Divergent or numerically unsupported computation.
struct NumericError : Error {
  using Error::Error;
};

// Config or input-file validation failure; carries the offending field path.
struct ConfigError : Error {
  ConfigError(const std::string& path, const std::string& message)
      : Error(path + ": " + message), field_path(path) {}
  std::string field_path;
};

}  // namespace spdcsim
