#ifndef GPWISH_ERRORS_HPP
#define GPWISH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gpwish {

// Bad user input: dimension mismatches, invalid settings, malformed files.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A Cholesky pivot was <= 0. Samplers treat this as log-target = -inf and
// reject the offending proposal.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  explicit NotPositiveDefiniteError(const std::string& what)
      : std::runtime_error(what) {}
};

// A look-back operation was invoked before the window filled. This is a
// sequencing bug in the caller, not a data-dependent failure.
class WindowNotReadyError : public std::logic_error {
 public:
  explicit WindowNotReadyError(const std::string& what)
      : std::logic_error(what) {}
};

}  // namespace gpwish

#endif
