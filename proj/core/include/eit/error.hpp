#pragma once

#include <stdexcept>
#include <string>

namespace eit {

/// Base of every error the toolkit throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied value violates an operation's precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A referenced question, run, job or label does not exist.
class NotFound : public Error {
 public:
  using Error::Error;
};

/// Input files, the data directory or persisted state are missing or malformed.
class DataError : public Error {
 public:
  using Error::Error;
};

/// An embedding provider could not produce vectors.
class ProviderError : public Error {
 public:
  ProviderError(const std::string& provider_id, const std::string& what)
      : Error("embedding provider '" + provider_id + "': " + what), provider_id_(provider_id) {}

  const std::string& provider_id() const noexcept { return provider_id_; }

 private:
  std::string provider_id_;
};

/// Another writer holds the store, or a job is already running for the same question.
class Conflict : public Error {
 public:
  using Error::Error;
};

}  // namespace eit
