#pragma once

#include <stdexcept>
#include <string>

namespace netdesign {

// Filesystem-level failures (missing file, unwritable path). Malformed
// content raises std::invalid_argument like every other validation error.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace netdesign
