/*
 Copyright 2026 The slds Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef SLDS_ERRORS_HPP
#define SLDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slds {

/// Malformed files, bad dimensions, schema or invariant violations in inputs.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Ill-conditioning, non-finite objectives, Riccati non-convergence.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace slds

#endif  // SLDS_ERRORS_HPP
