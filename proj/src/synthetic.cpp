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
#include "slds/synthetic.hpp"

#include "slds/errors.hpp"
#include "slds/lds_core.hpp"

namespace slds {

Eigen::MatrixXd random_matrix_with_radius(SplitMix64& rng, Eigen::Index n, double radius) {
    Eigen::MatrixXd A = rng.normal_matrix(n, n);
    const double rho = spectral_radius(A);
    if (rho == 0.0) throw NumericalError("random matrix is nilpotent; pick another seed");
    return A * (radius / rho);
}

RegressionData random_pairs(SplitMix64& rng, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                            Eigen::Index pairs, double noise) {
    const auto n = A.rows();
    const auto m = B.cols();
    Eigen::MatrixXd X = rng.normal_matrix(n, pairs);
    Eigen::MatrixXd U = rng.normal_matrix(m, pairs);
    Eigen::MatrixXd Y = A * X;
    if (m > 0) Y += B * U;
    if (noise > 0.0) Y += noise * rng.normal_matrix(n, pairs);
    return RegressionData(std::move(X), std::move(Y), std::move(U));
}

Sequence simulate_sequence(SplitMix64& rng, const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                           const Eigen::VectorXd& x0, Eigen::Index steps, double noise) {
    const auto n = A.rows();
    const auto m = B.cols();
    Sequence seq;
    seq.states.resize(n, steps);
    seq.controls = rng.normal_matrix(m, steps - 1);
    seq.states.col(0) = x0;
    for (Eigen::Index t = 0; t + 1 < steps; ++t) {
        Eigen::VectorXd next = A * seq.states.col(t);
        if (m > 0) next += B * seq.controls.col(t);
        if (noise > 0.0) next += noise * rng.normal_matrix(n, 1);
        seq.states.col(t + 1) = next;
    }
    return seq;
}

}  // namespace slds
