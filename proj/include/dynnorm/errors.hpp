#pragma once

#include <stdexcept>
#include <string>

namespace dynnorm {

// Raised when a normalization is asked to divide by a (near-)zero spread.
class DegenerateVariance : public std::domain_error {
public:
  explicit DegenerateVariance(const std::string& what) : std::domain_error(what) {}
};

class IndexOutOfRange : public std::out_of_range {
public:
  explicit IndexOutOfRange(const std::string& what) : std::out_of_range(what) {}
};

// The scalar minimizer could not find an interior minimum inside its search range.
class BracketFailure : public std::runtime_error {
public:
  explicit BracketFailure(const std::string& what) : std::runtime_error(what) {}
};

class EmptyOutliers : public std::runtime_error {
public:
  explicit EmptyOutliers(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dynnorm
