// Copyright 2026 The fieldnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIELDNAV_ERRORS_HPP_
#define FIELDNAV_ERRORS_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace fieldnav {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grid would exceed the configured voxel budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A continuous query fell outside the sampling box of a field.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, const Eigen::Vector3d& where)
      : Error(what + " at (" + std::to_string(where.x()) + ", " +
              std::to_string(where.y()) + ", " + std::to_string(where.z()) +
              ")"),
        where_(where) {}
  explicit DomainError(const std::string& what)
      : Error(what), where_(Eigen::Vector3d::Constant(NAN)) {}

  const Eigen::Vector3d& where() const { return where_; }

 private:
  Eigen::Vector3d where_;
};

class InvalidGoalError : public Error {
 public:
  using Error::Error;
};

// Wrong number of body parts / priors / samples.
class ArityError : public Error {
 public:
  using Error::Error;
};

// Input failed a numeric validation (e.g. a direction that is not unit norm).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class SceneRejectedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fieldnav

#endif  // FIELDNAV_ERRORS_HPP_
