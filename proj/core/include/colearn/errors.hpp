#pragma once

#include <stdexcept>
#include <string>

namespace colearn {

// Precondition violation on an operation's inputs: dimension mismatches,
// empty batches, out-of-range schedule arguments and the like.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// rel_change against a reference vector of zero norm.
class DegenerateReferenceError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Unreadable or malformed checkpoint files.
class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV ingestion failure; messages carry "<path>:<line>".
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid run configuration. Keeps the offending field name so callers can
// report it verbatim.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config field '" + field + "': " + message),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// A participant exhausted its retry budget inside a round.
class RoundAbortError : public std::runtime_error {
 public:
  RoundAbortError(int participant_id, const std::string& message)
      : std::runtime_error(message), participant_id_(participant_id) {}

  int participant_id() const noexcept { return participant_id_; }

 private:
  int participant_id_;
};

}  // namespace colearn
