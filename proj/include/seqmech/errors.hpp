#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace seqmech {

// All library errors carry a stable kind tag so callers (in particular the
// CLI) can map them to exit codes without parsing message text.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

// Malformed files, unknown names, invalid environments.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("input", what) {}
};

// A documented call precondition was broken by the caller.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error("precondition", what) {}
};

// An operation needed a prior and the environment has none.
class MissingPriorError : public Error {
 public:
  explicit MissingPriorError(const std::string& what)
      : Error("missing-prior", what) {}
};

// Conditioning on an own-type slice of prior mass zero.
class ZeroMarginalError : public Error {
 public:
  explicit ZeroMarginalError(const std::string& what)
      : Error("zero-marginal", what) {}
};

// A play queried an action that is not available at the current node.
class ActionUnavailableError : public Error {
 public:
  explicit ActionUnavailableError(const std::string& what)
      : Error("action-unavailable", what) {}
};

// State-space or enumeration budget exceeded.
class LimitExceededError : public Error {
 public:
  explicit LimitExceededError(const std::string& what)
      : Error("limit-exceeded", what) {}
};

// Synthesis requested for an operator that does not reach singletons.
class NotAchievableError : public Error {
 public:
  explicit NotAchievableError(const std::string& what)
      : Error("not-achievable", what) {}
};

// A structural assumption of the disclosure construction failed
// (non-rectangular cell, overlapping per-player blocks).
class StructureError : public Error {
 public:
  explicit StructureError(const std::string& what) : Error("structure", what) {}
};

// Property check asked for a property with no sampled test.
class UnsupportedPropertyError : public Error {
 public:
  explicit UnsupportedPropertyError(const std::string& what)
      : Error("unsupported-property", what) {}
};

// Exact arithmetic left the representable range.
class OverflowError : public Error {
 public:
  explicit OverflowError(const std::string& what) : Error("overflow", what) {}
};

// A guard that should be unreachable fired; always a bug.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal", what) {}
};

}  // namespace seqmech
