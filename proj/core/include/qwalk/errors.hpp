#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

// Every failure the library can signal, so callers (and the CLI exit-code
// mapping) can react by kind instead of parsing message text.
enum class errc {
  parse,       // malformed step-set / flag / file syntax
  argument,    // structurally valid input outside an operation's domain
  domain,      // math-domain failure (non-positive evaluation point, |c| >= 1, ...)
  triviality,  // model has no walks / projection lost one sign side
  numeric,     // solver failed to reach a convergence or divergence verdict
  resource,    // memory budget exceeded
  trial_cap,   // rejection loop hit the configured trial cap
  no_sample,   // requested object has count zero (no walk/word of that length)
  validation,  // grammar or cache-file consistency check failed
  io,          // file missing/unreadable/version mismatch
};

class Error : public std::runtime_error {
 public:
  Error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qwalk
