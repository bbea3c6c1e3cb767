#pragma once

#include <string>

#include "mixroute/instance.hpp"

namespace mixroute {

/// Parses the JSON instance format. Throws kParseError (malformed JSON or a
/// missing/mistyped field, named by its path) and kValidationError (values
/// violating network or cost invariants).
Instance parse_instance(const std::string& text, const std::string& name = "instance");

/// Reads and parses a file; the instance name defaults to the file stem.
Instance load_instance(const std::string& path);

/// Serializes an instance (round-trips through parse_instance).
std::string write_instance(const Instance& instance);

}  // namespace mixroute
