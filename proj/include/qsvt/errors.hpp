#pragma once
// Error taxonomy shared by the library and the CLI exit-code mapping:
//   ValidationError -> exit 2   (bad inputs, domain violations, file schema)
//   ResourceError   -> exit 3   (degree caps, qubit budget, allocation limits)
//   OracleError     -> exit 4   (an oracle cross-check failed; regression signal)

#include <stdexcept>
#include <string>

namespace qsvt {

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

class OracleError : public std::runtime_error {
 public:
  explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsvt
