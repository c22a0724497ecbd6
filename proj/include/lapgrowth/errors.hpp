#pragma once

#include <stdexcept>
#include <string>

namespace lapgrowth {

// A simulation tried to act on the outermost ring of its preallocated window.
class WindowOverflow : public std::runtime_error {
 public:
  explicit WindowOverflow(const std::string& what) : std::runtime_error("window overflow: " + what) {}
};

// An iterative solver hit its iteration cap before reaching tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error("no convergence: " + what) {}
};

// A post-condition check failed; always indicates a bug.
class VerificationError : public std::logic_error {
 public:
  explicit VerificationError(const std::string& what) : std::logic_error("verification failed: " + what) {}
};

}  // namespace lapgrowth
