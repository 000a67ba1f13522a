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
#ifndef SLDS_SYNTHETIC_HPP
#define SLDS_SYNTHETIC_HPP

#include <Eigen/Dense>

#include "slds/dataio.hpp"
#include "slds/random.hpp"

namespace slds {

/// Gaussian N x N matrix rescaled to the given spectral radius.
Eigen::MatrixXd random_matrix_with_radius(SplitMix64& rng, Eigen::Index n, double radius);

/**
 * Independent pairs: x_j, u_j ~ N(0, I), y_j = A x_j + B u_j + noise * N(0, I).
 * B may be N x 0.
 */
RegressionData random_pairs(SplitMix64& rng, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            Eigen::Index pairs, double noise = 0.0);

/// One trajectory of `steps` states from x0 under Gaussian controls (if B has
/// columns) and additive Gaussian process noise.
Sequence simulate_sequence(SplitMix64& rng, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::VectorXd& x0, Eigen::Index steps, double noise = 0.0);

}  // namespace slds

#endif  // SLDS_SYNTHETIC_HPP
