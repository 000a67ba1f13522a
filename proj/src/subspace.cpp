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
#include "slds/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slds/errors.hpp"

namespace slds {

SvdReduction svd_reduce(const Eigen::MatrixXd& snapshots, Eigen::Index rank,
                        const SvdReduceOptions& options) {
    const auto n = snapshots.rows();
    const auto p = snapshots.cols();
    if (rank < 1 || rank > std::min(n, p))
        throw InputError("subspace rank " + std::to_string(rank) + " outside [1, " +
                         std::to_string(std::min(n, p)) + "]");
    if (!snapshots.allFinite()) throw InputError("snapshot matrix has non-finite entries");

    Eigen::VectorXd mean;
    Eigen::MatrixXd centered;
    if (options.center) {
        mean = snapshots.rowwise().mean();
        centered = snapshots.colwise() - mean;
    }
    const Eigen::MatrixXd& D = options.center ? centered : snapshots;

    Eigen::BDCSVD<Eigen::MatrixXd> svd(D, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double eps = std::numeric_limits<double>::epsilon();
    const double threshold = static_cast<double>(std::max(n, p)) * eps * sigma(0);
    if (sigma(0) == 0.0 || sigma(rank - 1) <= threshold)
        throw InputError("snapshot matrix is rank deficient: sigma_" + std::to_string(rank) +
                         " = " + std::to_string(sigma(rank - 1)) + " at or below tolerance");

    SvdReduction out;
    out.basis.basis = svd.matrixU().leftCols(rank);
    out.basis.singular_values = sigma.head(rank);
    out.basis.mean = std::move(mean);
    Eigen::MatrixXd V = svd.matrixV().leftCols(rank);

    // Deterministic signs: the largest-magnitude entry of each basis column is positive.
    for (Eigen::Index k = 0; k < rank; ++k) {
        Eigen::Index arg = 0;
        out.basis.basis.col(k).cwiseAbs().maxCoeff(&arg);
        if (out.basis.basis(arg, k) < 0.0) {
            out.basis.basis.col(k) *= -1.0;
            V.col(k) *= -1.0;
        }
    }
    out.reduced = out.basis.singular_values.asDiagonal() * V.transpose();
    return out;
}

Eigen::MatrixXd lift_states(const SubspaceBasis& basis, const Eigen::MatrixXd& reduced) {
    if (reduced.rows() != basis.reduced_dim())
        throw InputError("lift_states: expected " + std::to_string(basis.reduced_dim()) +
                         " rows, got " + std::to_string(reduced.rows()));
    Eigen::MatrixXd full = basis.basis * reduced;
    if (basis.centered()) full.colwise() += basis.mean;
    return full;
}

Eigen::MatrixXd reduce_states(const SubspaceBasis& basis, const Eigen::MatrixXd& full) {
    if (full.rows() != basis.original_dim())
        throw InputError("reduce_states: expected " + std::to_string(basis.original_dim()) +
                         " rows, got " + std::to_string(full.rows()));
    if (basis.centered()) return basis.basis.transpose() * (full.colwise() - basis.mean);
    return basis.basis.transpose() * full;
}

void validate_basis(const SubspaceBasis& basis) {
    const auto r = basis.reduced_dim();
    if (r < 1 || r > basis.original_dim()) throw InputError("subspace basis has invalid shape");
    if (basis.singular_values.size() != r)
        throw InputError("subspace basis needs one singular value per column");
    if (basis.centered() && basis.mean.size() != basis.original_dim())
        throw InputError("subspace mean has the wrong length");
    const double defect =
        (basis.basis.transpose() * basis.basis - Eigen::MatrixXd::Identity(r, r)).norm();
    if (!(defect <= 1e-10)) throw InputError("subspace basis is not orthonormal");
    for (Eigen::Index k = 0; k < r; ++k) {
        if (!(basis.singular_values(k) > 0.0))
            throw InputError("subspace singular values must be positive");
        if (k > 0 && basis.singular_values(k) > basis.singular_values(k - 1))
            throw InputError("subspace singular values must be non-increasing");
    }
}

}  // namespace slds
