#pragma once

#include <stdexcept>
#include <string>

namespace cbx {

/// Invalid user configuration (bad flag values, malformed config/scene content).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Geometry for which the inlier box is undefined, e.g. a board plane through
/// the camera center.
class DegenerateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cbx
