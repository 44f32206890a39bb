#pragma once

#include <stdexcept>
#include <string>

namespace optimseed {

// Base for all toolkit errors. Subclasses map to distinct CLI exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File missing, unreadable, or unwritable.
struct IoError : Error {
  using Error::Error;
};

// Malformed input data (bad JSONL line, bad CSV cell, bad config key).
struct ParseError : Error {
  using Error::Error;
};

// Contract violation on otherwise well-formed input (unknown token,
// overlapping seed lists, too few candidates, ...).
struct DomainError : Error {
  using Error::Error;
};

// Non-finite objective or other numeric breakdown during optimization.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace optimseed
