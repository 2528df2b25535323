#pragma once

#include <stdexcept>
#include <string>

namespace zipfsketch {

// Argument errors are reported with std::invalid_argument / std::out_of_range.
// The types below cover the remaining failure classes.

/// An enumeration or allocation guard was exceeded. This is an argument
/// error, kept distinct so front ends can report it separately.
class GuardError : public std::invalid_argument {
 public:
  explicit GuardError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation was called before the object was ready for it.
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& what) : std::logic_error(what) {}
};

/// Input data cannot be processed (e.g. nonpositive values under a log).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// A learned sketch ran out of exact slots under OverflowPolicy::kThrow.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zipfsketch
