#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "robusthedge/rational.hpp"

namespace robusthedge {

/// Node of the scenario lattice: outcome indices (w_1, ..., w_t); the root is
/// the empty path.
using Path = std::vector<int>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// Invalid market data. `field` is a path such as `kernels["u"][1]`.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed the configured cap (see explosion_cap()).
class ExplosionGuard : public Error {
 public:
  using Error::Error;
};

/// The LP kernel hit its pivot budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// One-step superhedging LP unbounded below.
class UnboundedBelow : public Error {
 public:
  using Error::Error;
};

class NoArbitrageViolation : public Error {
 public:
  NoArbitrageViolation(Path node, Vec certificate, const std::string& message)
      : Error(message), node_(std::move(node)), certificate_(std::move(certificate)) {}
  const Path& node() const { return node_; }
  const Vec& certificate() const { return certificate_; }

 private:
  Path node_;
  Vec certificate_;
};

/// The martingale polytope is empty.
class InfeasiblePolytope : public Error {
 public:
  using Error::Error;
};

/// No strictly positive martingale measure exists.
class NoPoint : public Error {
 public:
  using Error::Error;
};

class LambdaOutOfRange : public Error {
 public:
  using Error::Error;
};

class BadParameter : public Error {
 public:
  using Error::Error;
};

/// Cap on enumerated selections/patterns: 10^6 unless ROBUSTHEDGE_CAP is set.
std::size_t explosion_cap();

}  // namespace robusthedge
