#pragma once

#include <stdexcept>
#include <string>

namespace symris {

// Eigensolver or other numerical backend failure. CLI maps this to exit code 3.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// File / format failure. CLI maps this to exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}
