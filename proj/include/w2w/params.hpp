/*
  Copyright (c) The w2w Authors.

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef W2W_PARAMS_HPP
#define W2W_PARAMS_HPP

#include <array>
#include <optional>

#include "w2w/bitext.hpp"

namespace w2w {

// Hidden parameters of one link class. lambda is pinned to K/N and tau is
// derived from the other three.
struct ClassParams {
  LinkClass cls = LinkClass::content;
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double lambda = 0.0;
  double tau = 0.0;
  double log_likelihood = 0.0;
  // Set when the optimum sits on the lambda_plus cap.
  bool capped = false;

  bool operator==(const ClassParams&) const = default;
};

// Empty slots mark classes that could not be estimated.
using ClassParamSet = std::array<std::optional<ClassParams>, kClassCount>;

}  // namespace w2w

#endif  // W2W_PARAMS_HPP
