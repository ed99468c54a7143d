// Copyright 2026 The qht Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace qht {

/// Rejected input: malformed, non-finite, or violating a domain invariant.
class validation_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Internal cross-check failed: two routes that must agree numerically did not.
class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace qht
