// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace uvnlos {

/// Invalid input. `field()` names the offending parameter or invariant.
class DomainError : public std::invalid_argument {
 public:
  DomainError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Vertex angles match no row of the scenario table.
class UnclassifiableError : public std::runtime_error {
 public:
  UnclassifiableError(const std::string& what, std::array<double, 4> angles)
      : std::runtime_error(what), angles_(angles) {}
  const std::array<double, 4>& angles() const noexcept { return angles_; }

 private:
  std::array<double, 4> angles_;
};

/// A plane misses the finite edge it was intersected with.
class NoIntersection : public std::runtime_error {
 public:
  explicit NoIntersection(const std::string& edge)
      : std::runtime_error("plane does not intersect edge " + edge), edge_(edge) {}
  const std::string& edge() const noexcept { return edge_; }

 private:
  std::string edge_;
};

/// Requested CSV column is absent.
class MissingColumn : public std::runtime_error {
 public:
  explicit MissingColumn(const std::string& name)
      : std::runtime_error("missing column: " + name), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace uvnlos
