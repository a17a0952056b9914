#pragma once

#include <stdexcept>
#include <string>

namespace logforms {

// Violated caller-facing precondition (CLI maps these to exit code 1).
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A computation would only succeed over an extension of the working field.
// `suggested_factor` is the extension degree over the current field when known, 0 otherwise.
class NeedsLargerField : public PreconditionError {
 public:
  explicit NeedsLargerField(const std::string& what, int suggested_factor = 0)
      : PreconditionError(what), suggested_factor(suggested_factor) {}
  int suggested_factor;
};

// Broken internal invariant: two independent routes disagreed, or an identity
// that must hold for accepted inputs failed.  CLI maps these to exit code 2.
class InternalCheckError : public std::logic_error {
 public:
  explicit InternalCheckError(const std::string& what) : std::logic_error(what) {}
};

inline void check_precondition(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline void check_internal(bool ok, const std::string& what) {
  if (!ok) throw InternalCheckError(what);
}

}  // namespace logforms
