#pragma once

#include <stdexcept>
#include <string>

namespace subpix {

// Error taxonomy shared by the library and the command line tool. The tool
// maps domain validation (std::invalid_argument) to exit code 2 and the
// three types below to 3, 4 and 5.

class FileOpenError : public std::runtime_error {
 public:
  explicit FileOpenError(const std::string& what) : std::runtime_error(what) {}
};

class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation would exceed a configured size or work budget,
// e.g. materializing a cover or running an exhaustive search too large to
// finish. Lazy construction never throws this; enumeration does.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace subpix
