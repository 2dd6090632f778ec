// Copyright 2026 The flybelt Authors
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

#ifndef FLYBELT_ERROR_HPP_
#define FLYBELT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace flybelt {

// Bad input: parameters, configuration files, request ranges.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A solver or integrator could not produce a result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace flybelt

#endif  // FLYBELT_ERROR_HPP_
