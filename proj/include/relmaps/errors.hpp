// Error types shared by the library and the command-line tool.
//
// input_error    — malformed or semantically inconsistent user input (bad
//                  JSON, unknown fields, graphs that fail validation where a
//                  valid one is required, mismatched tangency data, ...).
// capacity_error — the request is well-formed but exceeds a documented
//                  resource bound (degree caps, enumeration caps).
//
// The CLI maps input_error to exit code 2 and capacity_error to exit code 3.
#pragma once

#include <stdexcept>
#include <string>

namespace relmaps {

class input_error : public std::runtime_error {
  public:
    explicit input_error(const std::string& message) : std::runtime_error(message) {}
    input_error(const std::string& where, const std::string& message)
        : std::runtime_error(where.empty() ? message : where + ": " + message) {}
};

class capacity_error : public std::runtime_error {
  public:
    explicit capacity_error(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace relmaps
