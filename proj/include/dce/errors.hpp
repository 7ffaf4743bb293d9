#pragma once

#include <stdexcept>
#include <string>

namespace dce {

// Error taxonomy shared by the library and the command-line tool.  Each class
// maps to a distinct process exit code so scripted callers can tell a bad
// input apart from a numerical breakdown or a filesystem problem.

// Invalid configuration or arguments: schema violations, out-of-range
// parameters, operations requested on unsupported trajectory kinds.
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical procedure failed to reach its target: adaptive quadrature or
// step-size refinement hit its subdivision cap, a root finder did not
// converge, a matrix solve broke down.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem and serialization failures.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

// Process exit codes used by the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIo = 4;

}  // namespace dce
