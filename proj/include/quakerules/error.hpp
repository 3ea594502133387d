#pragma once

#include <stdexcept>
#include <string>

namespace quakerules {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Source stream could not be read at all.
class IngestionError : public Error {
 public:
  using Error::Error;
};

// A catalog produced zero well-formed records.
class EmptyCatalogError : public Error {
 public:
  using Error::Error;
};

// Basketization produced zero transactions.
class EmptyDatabaseError : public Error {
 public:
  using Error::Error;
};

// Unknown item id or region name.
class LookupError : public Error {
 public:
  using Error::Error;
};

// A metric was requested for a rule whose antecedent or consequent has zero support.
class UndefinedRuleError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant, e.g. a support table that is not downward closed.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration value or configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace quakerules
