#pragma once

#include <compare>
#include <stdexcept>
#include <string>

namespace freer {

/// Base error type for everything in this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A named participant of a choreography. Names are wire-safe: nonempty,
/// no whitespace or newlines. Locations order lexicographically by name,
/// which fixes deterministic broadcast order.
class Location {
 public:
  explicit Location(std::string name);

  const std::string& name() const { return name_; }

  friend bool operator==(const Location& a, const Location& b) {
    return a.name_ == b.name_;
  }
  friend std::strong_ordering operator<=>(const Location& a, const Location& b) {
    return a.name_ <=> b.name_;
  }

 private:
  std::string name_;
};

}  // namespace freer
