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
#include <cmath>

#include "doctest.h"

#include "slds/errors.hpp"
#include "slds/random.hpp"
#include "slds/subspace.hpp"

using namespace slds;

namespace {

double orthonormality_defect(const Eigen::MatrixXd& U) {
    return (U.transpose() * U - Eigen::MatrixXd::Identity(U.cols(), U.cols())).norm();
}

}  // namespace

TEST_CASE("exact-rank inputs are reproduced") {
    SUBCASE("identity") {
        const Eigen::MatrixXd D = Eigen::MatrixXd::Identity(3, 3);
        const auto red = svd_reduce(D, 3);
        CHECK((D - red.basis.basis * red.reduced).norm() <= 1e-12);
        // D_r is I up to a signed permutation.
        CHECK((red.reduced.cwiseAbs() * red.reduced.cwiseAbs().transpose() -
               Eigen::MatrixXd::Identity(3, 3))
                  .norm() <= 1e-12);
    }
    SUBCASE("rank one outer product") {
        SplitMix64 rng(1);
        const Eigen::MatrixXd D = rng.normal_matrix(6, 1) * rng.normal_matrix(1, 9);
        const auto red = svd_reduce(D, 1);
        CHECK((D - red.basis.basis * red.reduced).norm() <= 1e-10);
        CHECK_THROWS_AS(svd_reduce(D, 2), InputError);
    }
}

TEST_CASE("truncation error matches the discarded singular values") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::MatrixXd D = rng.normal_matrix(50, 40);
        // Oracle: full SVD by a different algorithm (one-sided Jacobi).
        Eigen::JacobiSVD<Eigen::MatrixXd> full(D);
        const Eigen::VectorXd s = full.singularValues();
        const double tail = s.tail(30).squaredNorm();

        const auto red = svd_reduce(D, 10);
        const double err = (D - red.basis.basis * red.reduced).squaredNorm();
        CHECK(std::abs(err - tail) <= 1e-8 * tail);
        CHECK((red.basis.singular_values - s.head(10)).norm() <= 1e-10 * s(0));
        CHECK(orthonormality_defect(red.basis.basis) <= 1e-10);
    }
}

TEST_CASE("truncation error is non-increasing in r") {
    SplitMix64 rng(8);
    const Eigen::MatrixXd D = rng.normal_matrix(20, 15);
    double previous = INFINITY;
    for (Eigen::Index r = 1; r <= 15; ++r) {
        const auto red = svd_reduce(D, r);
        const double err = (D - lift_states(red.basis, red.reduced)).norm();
        CHECK(err <= previous + 1e-12);
        previous = err;
    }
    CHECK(previous <= 1e-10);
}

TEST_CASE("reduced snapshots are Sigma V^T and signs are deterministic") {
    SplitMix64 rng(4);
    const Eigen::MatrixXd D = rng.normal_matrix(8, 12);
    const auto red = svd_reduce(D, 4);
    // D_r = U^T D for the orthonormal basis.
    CHECK((red.reduced - red.basis.basis.transpose() * D).norm() <= 1e-10);
    for (Eigen::Index k = 0; k < 4; ++k) {
        Eigen::Index arg = 0;
        red.basis.basis.col(k).cwiseAbs().maxCoeff(&arg);
        CHECK(red.basis.basis(arg, k) > 0.0);
    }
    const auto flipped = svd_reduce(-D, 4);
    CHECK((flipped.basis.basis - red.basis.basis).norm() <= 1e-10);
    CHECK((flipped.reduced + red.reduced).norm() <= 1e-10);
}

TEST_CASE("lift and reduce") {
    SplitMix64 rng(9);
    const auto red = svd_reduce(rng.normal_matrix(10, 7), 4);
    const auto& basis = red.basis;

    CHECK(lift_states(basis, Eigen::MatrixXd::Zero(4, 3)).isZero(0.0));
    const Eigen::MatrixXd Z = rng.normal_matrix(4, 5);
    CHECK((reduce_states(basis, lift_states(basis, Z)) - Z).norm() <= 1e-12);

    // A vector orthogonal to the basis range reduces to zero.
    const Eigen::MatrixXd v = rng.normal_matrix(10, 1);
    const Eigen::MatrixXd orth = v - basis.basis * (basis.basis.transpose() * v);
    CHECK(reduce_states(basis, orth).norm() <= 1e-12);

    SubspaceBasis coords;
    coords.basis = Eigen::MatrixXd::Identity(5, 2);
    coords.singular_values = Eigen::Vector2d(2, 1);
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(5, 5);
    expected.topRows(2) = rng.normal_matrix(2, 5);
    CHECK(lift_states(coords, expected.topRows(2)) == expected);

    SubspaceBasis identity;
    identity.basis = Eigen::MatrixXd::Identity(3, 3);
    identity.singular_values = Eigen::Vector3d(1, 1, 1);
    const Eigen::MatrixXd X = rng.normal_matrix(3, 4);
    CHECK(reduce_states(identity, X) == X);

    CHECK_THROWS_AS(lift_states(basis, Eigen::MatrixXd::Zero(3, 1)), InputError);
    CHECK_THROWS_AS(reduce_states(basis, Eigen::MatrixXd::Zero(4, 1)), InputError);
}

TEST_CASE("exact-rank lift reproduces the snapshots, with and without centering") {
    SplitMix64 rng(10);
    const Eigen::MatrixXd D = rng.normal_matrix(12, 3) * rng.normal_matrix(3, 20);
    const auto red = svd_reduce(D, 3);
    CHECK((lift_states(red.basis, red.reduced) - D).norm() <= 1e-10);

    const Eigen::MatrixXd shifted = D.colwise() + Eigen::VectorXd::Constant(12, 5.0);
    const auto centered = svd_reduce(shifted, 3, {.center = true});
    CHECK(centered.basis.centered());
    CHECK((lift_states(centered.basis, centered.reduced) - shifted).norm() <= 1e-9);
}

TEST_CASE("rank checks") {
    CHECK_THROWS_AS(svd_reduce(Eigen::MatrixXd::Identity(3, 3), 0), InputError);
    CHECK_THROWS_AS(svd_reduce(Eigen::MatrixXd::Identity(3, 3), 4), InputError);
    CHECK_THROWS_AS(svd_reduce(Eigen::MatrixXd::Zero(3, 3), 1), InputError);
    Eigen::MatrixXd nearly(3, 3);
    nearly << 1, 0, 0, 0, 1, 0, 0, 0, 1e-20;
    CHECK_THROWS_AS(svd_reduce(nearly, 3), InputError);
    CHECK_NOTHROW(svd_reduce(nearly, 2));
}

TEST_CASE("basis validation") {
    SubspaceBasis b;
    b.basis = Eigen::MatrixXd::Identity(3, 2);
    b.singular_values = Eigen::Vector2d(2, 1);
    CHECK_NOTHROW(validate_basis(b));
    b.singular_values = Eigen::Vector2d(1, 2);
    CHECK_THROWS_AS(validate_basis(b), InputError);
    b.singular_values = Eigen::Vector2d(2, 1);
    b.basis(0, 1) = 0.5;
    CHECK_THROWS_AS(validate_basis(b), InputError);
}
