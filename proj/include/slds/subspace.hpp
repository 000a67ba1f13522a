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
#ifndef SLDS_SUBSPACE_HPP
#define SLDS_SUBSPACE_HPP

#include <Eigen/Dense>

namespace slds {

/**
 * Orthonormal basis of the dominant left singular subspace of a snapshot
 * matrix. Maps N-dimensional observations to r-dimensional model
 * coordinates and back.
 *
 * `mean` is empty unless the snapshots were centered before the SVD; when
 * present it is subtracted by reduce_states and added back by lift_states.
 */
struct SubspaceBasis {
    Eigen::MatrixXd basis;            // N x r, orthonormal columns
    Eigen::VectorXd singular_values;  // r, positive, non-increasing
    Eigen::VectorXd mean;             // N or empty

    Eigen::Index original_dim() const { return basis.rows(); }
    Eigen::Index reduced_dim() const { return basis.cols(); }
    bool centered() const { return mean.size() != 0; }
};

struct SvdReduceOptions {
    bool center = false;
};

struct SvdReduction {
    SubspaceBasis basis;
    Eigen::MatrixXd reduced;  // r x p, equals Sigma_r * V_r^T
};

/// Truncated SVD of the N x p snapshot matrix. Throws InputError when r is
/// out of range or exceeds the numerical rank of the snapshots.
SvdReduction svd_reduce(const Eigen::MatrixXd& snapshots, Eigen::Index rank,
                        const SvdReduceOptions& options = {});

Eigen::MatrixXd lift_states(const SubspaceBasis& basis, const Eigen::MatrixXd& reduced);

Eigen::MatrixXd reduce_states(const SubspaceBasis& basis, const Eigen::MatrixXd& full);

/// Checks the orthonormality and singular value invariants; throws InputError.
void validate_basis(const SubspaceBasis& basis);

}  // namespace slds

#endif  // SLDS_SUBSPACE_HPP
