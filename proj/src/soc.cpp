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
#include "slds/soc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "slds/errors.hpp"
#include "slds/lds_core.hpp"

namespace slds {
namespace {

// Z <- a * Z + b * W, elementwise over the four blocks.
SocParams combine(double a, const SocParams& z, double b, const SocParams& w) {
    return SocParams{a * z.S + b * w.S, a * z.O + b * w.O, a * z.C + b * w.C, a * z.B + b * w.B};
}

Eigen::PartialPivLU<Eigen::MatrixXd> factor_s(const Eigen::MatrixXd& S) {
    if (!S.allFinite()) throw NumericalError("S has non-finite entries");
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
    const double limit = static_cast<double>(S.rows()) * std::numeric_limits<double>::epsilon();
    if (!(lu.rcond() > limit))
        throw NumericalError("S is numerically singular (rcond " + std::to_string(lu.rcond()) + ")");
    return lu;
}

void check_shapes(const SocParams& z, const RegressionData& data) {
    const auto n = data.state_dim();
    if (z.S.rows() != n || z.S.cols() != n || z.O.rows() != n || z.O.cols() != n ||
        z.C.rows() != n || z.C.cols() != n)
        throw InputError("SOC parameters do not match the data's state dimension");
    if (z.B.rows() != n || z.B.cols() != data.control_dim())
        throw InputError("SOC B does not match the data's control dimension");
}

// Residual E = Y - S^{-1} O C S X - B U for a factored S.
Eigen::MatrixXd residual(const SocParams& z, const Eigen::PartialPivLU<Eigen::MatrixXd>& lu,
                         const RegressionData& data) {
    const Eigen::MatrixXd A = lu.solve(z.O * z.C * z.S);
    Eigen::MatrixXd E = data.Y();
    E.noalias() -= A * data.X();
    if (data.has_controls()) E.noalias() -= z.B * data.U();
    return E;
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> symmetric_eig(const Eigen::MatrixXd& M) {
    const Eigen::MatrixXd sym = 0.5 * (M + M.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    if (eig.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    return eig;
}

Eigen::MatrixXd from_eig(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& eig,
                         const Eigen::VectorXd& values) {
    const auto& V = eig.eigenvectors();
    Eigen::MatrixXd out = V * values.asDiagonal() * V.transpose();
    return 0.5 * (out + out.transpose());
}

// P = sum_k (A^T)^k A^k by squaring; requires rho(A) < 1.
std::optional<Eigen::MatrixXd> discrete_lyapunov(const Eigen::MatrixXd& A) {
    const auto n = A.rows();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd Ak = A;
    for (int i = 0; i < 64; ++i) {
        const Eigen::MatrixXd increment = Ak.transpose() * P * Ak;
        P += increment;
        if (!P.allFinite()) return std::nullopt;
        if (increment.norm() <= 1e-15 * P.norm()) return 0.5 * (P + P.transpose());
        Ak = (Ak * Ak).eval();
    }
    return std::nullopt;
}

struct PolarFactors {
    Eigen::MatrixXd orthogonal;
    Eigen::MatrixXd positive;
};

PolarFactors polar(const Eigen::MatrixXd& M) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& V = svd.matrixV();
    PolarFactors f;
    f.orthogonal = svd.matrixU() * V.transpose();
    f.positive = V * svd.singularValues().asDiagonal() * V.transpose();
    return f;
}

// Pairs sorted lexicographically by (x, y, u). Reordering changes rounding in
// every data product, and a single flipped line-search decision sends the
// iterates down a different path; sorting makes the fit depend only on the
// set of pairs.
RegressionData canonical_order(const RegressionData& data) {
    const auto p = data.pairs();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto key = [&](Eigen::Index j, Eigen::Index i) {
        const auto n = data.state_dim();
        if (i < n) return data.X()(i, j);
        if (i < 2 * n) return data.Y()(i - n, j);
        return data.U()(i - 2 * n, j);
    };
    const Eigen::Index rows = 2 * data.state_dim() + data.control_dim();
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            const double ka = key(a, i), kb = key(b, i);
            if (ka != kb) return ka < kb;
        }
        return false;
    });
    Eigen::MatrixXd U;
    if (data.has_controls()) U = data.U()(Eigen::all, order);
    return RegressionData(data.X()(Eigen::all, order), data.Y()(Eigen::all, order), std::move(U));
}

}  // namespace

double SocParams::norm() const {
    return std::sqrt(S.squaredNorm() + O.squaredNorm() + C.squaredNorm() + B.squaredNorm());
}

SocParams init_soc(const LdsModel& model, double margin, InitStrategy strategy) {
    const auto n = model.state_dim();
    if (!model.A.allFinite() || !model.B.allFinite())
        throw InputError("init_soc: model has non-finite entries");

    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd similar = model.A;
    if (strategy == InitStrategy::kLyapunov && spectral_radius(model.A) < 1.0) {
        if (auto P = discrete_lyapunov(model.A)) {
            const auto eig = symmetric_eig(*P);
            const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
            const double scale = root.maxCoeff();
            if (scale > 0.0 && root.minCoeff() > 1e-8 * scale) {
                S = from_eig(eig, root / scale);
                // S symmetric: (S A S^{-1})^T = S^{-1} (S A)^T
                const Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
                similar = lu.solve((S * model.A).transpose()).transpose();
            }
        }
    }

    const PolarFactors f = polar(similar);
    SocParams z;
    z.S = std::move(S);
    z.O = f.orthogonal;
    z.C = project_psd_contraction(f.positive, margin);
    z.B = model.B;
    if (z.B.size() == 0) z.B.resize(n, 0);
    return z;
}

Eigen::MatrixXd assemble_A(const SocParams& params) {
    const auto lu = factor_s(params.S);
    return lu.solve(params.O * params.C * params.S);
}

double objective(const SocParams& params, const RegressionData& data) {
    check_shapes(params, data);
    const auto lu = factor_s(params.S);
    return 0.5 * residual(params, lu, data).squaredNorm();
}

SocGradient gradients(const SocParams& params, const RegressionData& data) {
    check_shapes(params, data);
    const auto& S = params.S;
    const auto& O = params.O;
    const auto& C = params.C;
    const auto lu = factor_s(S);
    const Eigen::MatrixXd E = residual(params, lu, data);

    // G = S^{-T} E X^T and H = G S^T; every gradient is built from these two
    // N x N products.
    const Eigen::MatrixXd G = lu.transpose().solve(E * data.X().transpose());
    const Eigen::MatrixXd H = G * S.transpose();

    SocGradient grad;
    grad.O = -H * C.transpose();
    grad.C = -O.transpose() * H;
    // S^{-T} E X^T S^T C^T O^T S^{-T} = (S^{-1} O C H^T)^T
    grad.S = lu.solve(O * C * H.transpose()).transpose() - C.transpose() * O.transpose() * G;
    grad.B = Eigen::MatrixXd(params.B.rows(), params.B.cols());
    if (params.B.cols() > 0) grad.B = -E * data.U().transpose();
    return grad;
}

Eigen::MatrixXd project_spd(const Eigen::MatrixXd& S) {
    const auto eig = symmetric_eig(S);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double norm = values.cwiseAbs().maxCoeff();
    const double floor = 1e-8 * std::max(1.0, norm);
    if (values.minCoeff() >= floor) return 0.5 * (S + S.transpose());
    return from_eig(eig, values.cwiseMax(floor));
}

Eigen::MatrixXd nearest_orthogonal(const Eigen::MatrixXd& O) {
    return polar(O).orthogonal;
}

Eigen::MatrixXd project_psd_contraction(const Eigen::MatrixXd& C, double margin) {
    const auto eig = symmetric_eig(C);
    const Eigen::VectorXd& values = eig.eigenvalues();
    const double upper = 1.0 - margin;
    if (values.minCoeff() >= 0.0 && values.maxCoeff() <= upper) return 0.5 * (C + C.transpose());
    return from_eig(eig, values.cwiseMax(0.0).cwiseMin(upper));
}

SocParams project(const SocParams& params, double margin) {
    if (!params.S.allFinite() || !params.O.allFinite() || !params.C.allFinite() ||
        !params.B.allFinite())
        throw InputError("project: non-finite parameters");
    if (!(margin >= 0.0 && margin < 1.0)) throw InputError("project: margin must lie in [0, 1)");
    return SocParams{project_spd(params.S), nearest_orthogonal(params.O),
                     project_psd_contraction(params.C, margin), params.B};
}

bool is_feasible(const SocParams& params, double margin, double tol) {
    const auto n = params.state_dim();
    if (!params.S.allFinite() || !params.O.allFinite() || !params.C.allFinite()) return false;
    if ((params.S - params.S.transpose()).norm() > tol) return false;
    if ((params.C - params.C.transpose()).norm() > tol) return false;
    if ((params.O.transpose() * params.O - Eigen::MatrixXd::Identity(n, n)).norm() > tol)
        return false;
    const Eigen::VectorXd s = symmetric_eig(params.S).eigenvalues();
    const Eigen::VectorXd c = symmetric_eig(params.C).eigenvalues();
    return s.minCoeff() > 0.0 && c.minCoeff() >= -tol && c.maxCoeff() <= 1.0 - margin + tol;
}

std::pair<double, double> momentum_step(double alpha) {
    const double a2 = alpha * alpha;
    const double next = 0.5 * (std::sqrt(a2 * a2 + 4.0 * a2) - a2);
    const double beta = alpha * (1.0 - alpha) / (a2 + next);
    return {next, beta};
}

void FgmOptions::validate() const {
    if (k_max < 0) throw InputError("k_max must be non-negative");
    if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("lambda must lie in (0, 1)");
    if (!(alpha1 > 0.0 && alpha1 < 1.0)) throw InputError("alpha1 must lie in (0, 1)");
    if (!(stability_margin >= 0.0 && stability_margin < 1.0))
        throw InputError("stability margin must lie in [0, 1)");
    if (gamma0 && !(*gamma0 > 0.0 && std::isfinite(*gamma0)))
        throw InputError("gamma0 must be positive");
    if (gamma_min && !(*gamma_min > 0.0)) throw InputError("gamma_min must be positive");
    if (gamma0 && gamma_min && !(*gamma_min < *gamma0))
        throw InputError("gamma_min must be smaller than gamma0");
    if (time_budget_seconds && !(*time_budget_seconds > 0.0))
        throw InputError("time budget must be positive");
}

std::size_t optimizer_state_bytes(Eigen::Index state_dim, Eigen::Index control_dim) {
    const auto per_set =
        static_cast<std::size_t>(3 * state_dim * state_dim + state_dim * control_dim);
    return sizeof(double) * 4 * per_set;
}

SocFit fgm_fit(const RegressionData& input, const FgmOptions& options,
               const std::optional<SocParams>& init) {
    options.validate();
    const RegressionData data = canonical_order(input);
    const auto started = std::chrono::steady_clock::now();
    const double margin = options.stability_margin;

    SocParams z = init ? *init : init_soc(least_squares_fit(data), margin);
    check_shapes(z, data);
    z = project(z, margin);

    // Candidates whose S is too ill-conditioned to evaluate count as
    // infinitely bad; a NaN cost means the data or parameters blew up.
    auto safe_cost = [&](const SocParams& candidate) {
        double cost;
        try {
            cost = objective(candidate, data);
        } catch (const NumericalError&) {
            return std::numeric_limits<double>::infinity();
        }
        if (std::isnan(cost)) throw NumericalError("objective evaluated to NaN");
        return cost;
    };

    double cost = objective(z, data);
    if (!std::isfinite(cost)) throw NumericalError("objective at the initial point is not finite");

    SocFit fit;
    FitReport& report = fit.report;
    report.initial_cost = cost;
    report.objective_history.push_back(cost);
    report.state_bytes = optimizer_state_bytes(data.state_dim(), data.control_dim());

    auto finish = [&]() {
        fit.params = z;
        fit.model = LdsModel::make(assemble_A(z), z.B, MethodTag::kSoc);
        report.final_cost = cost;
        report.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        return fit;
    };

    if (options.k_max == 0) return finish();

    auto descent = [&](const SocParams& at) {
        SocGradient g = gradients(at, data);
        if (!options.update_b) g.B.setZero();
        if (!(std::isfinite(g.norm()))) throw NumericalError("gradient is not finite");
        return g;
    };

    double gamma0 = 0.0;
    if (options.gamma0) {
        gamma0 = *options.gamma0;
    } else {
        const double gnorm = descent(z).norm();
        if (gnorm == 0.0) {
            report.stalled = true;
            return finish();
        }
        gamma0 = 0.01 * z.norm() / gnorm;
    }
    const double gamma_min = options.gamma_min.value_or(1e-12 * gamma0);
    if (!(gamma_min < gamma0)) throw InputError("gamma_min must be smaller than gamma0");
    report.gamma0 = gamma0;

    SocParams extrapolated = z;
    bool momentum = false;  // extrapolated != z
    double alpha = options.alpha1;

    for (int k = 0; k < options.k_max; ++k) {
        if (options.time_budget_seconds) {
            const double elapsed =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
            if (elapsed >= *options.time_budget_seconds) break;
        }
        ++report.iterations;

        std::optional<SocGradient> grad;
        try {
            grad = descent(extrapolated);
        } catch (const NumericalError&) {
            if (!momentum) throw;
        }

        bool accepted = false;
        SocParams candidate;
        double candidate_cost = std::numeric_limits<double>::infinity();
        if (grad) {
            // Backtracking: shrink the step until the projected point does
            // not increase the cost of the stored solution.
            double gamma = gamma0;
            candidate = project(combine(1.0, extrapolated, -gamma, *grad), margin);
            candidate_cost = safe_cost(candidate);
            while (candidate_cost > cost && gamma >= gamma_min) {
                gamma *= options.lambda;
                candidate = project(combine(1.0, extrapolated, -gamma, *grad), margin);
                candidate_cost = safe_cost(candidate);
            }
            accepted = candidate_cost <= cost;
        }

        if (!accepted) {
            ++report.restarts;
            if (!momentum) {
                report.stalled = true;
                if (options.observer) options.observer({k + 1, z, cost, true});
                break;
            }
            extrapolated = z;
            momentum = false;
            alpha = options.alpha1;
        } else {
            const auto [next_alpha, beta] = momentum_step(alpha);
            extrapolated = combine(1.0 + beta, candidate, -beta, z);
            if (!options.update_b) extrapolated.B = candidate.B;
            momentum = beta != 0.0;
            z = std::move(candidate);
            cost = candidate_cost;
            alpha = next_alpha;
            report.objective_history.push_back(cost);
        }
        if (options.observer) options.observer({k + 1, z, cost, !accepted});
    }
    return finish();
}

SocFit refine(const LdsModel& model, const RegressionData& data, const FgmOptions& options) {
    if (!is_stable(model.A)) throw InputError("refine: input model is not stable");
    const double input_cost = frobenius_cost(model.A, model.B, data);
    SocFit fit = fgm_fit(data, options,
                         init_soc(model, options.stability_margin, InitStrategy::kLyapunov));
    if (fit.report.final_cost > input_cost) {
        // The factorization could not reproduce the input exactly (boundary
        // or non-normal case) and the search did not recover the gap.
        fit.model = LdsModel::make(model.A, model.B, MethodTag::kSoc);
        fit.model.subspace = model.subspace;
        fit.report.final_cost = input_cost;
        return fit;
    }
    fit.model.subspace = model.subspace;
    return fit;
}

}  // namespace slds
