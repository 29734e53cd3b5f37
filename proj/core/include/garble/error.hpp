#pragma once

#include <stdexcept>
#include <string>

namespace garble {

// Single error type for the whole toolkit; the message carries all context
// (file name, record index, offending value).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace garble
