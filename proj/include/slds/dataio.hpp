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
#ifndef SLDS_DATAIO_HPP
#define SLDS_DATAIO_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include "json.hpp"

#include "slds/subspace.hpp"

namespace slds {

enum class MatrixEncoding {
    kAuto,    // binary if the file starts with the magic bytes, csv otherwise
    kCsv,     // "rows,cols" header line, then one comma-separated row per line
    kBinary,  // "SLDSMAT1", u64 rows, u64 cols, row-major f64, little-endian
};

inline constexpr char kBinaryMagic[8] = {'S', 'L', 'D', 'S', 'M', 'A', 'T', '1'};

/// Loads a matrix; all entries must be finite. Throws InputError with the
/// offending line / row / column on malformed content.
Eigen::MatrixXd load_matrix(const std::filesystem::path& path,
                            MatrixEncoding encoding = MatrixEncoding::kAuto);

/// kAuto picks csv for a ".csv" or ".txt" extension and binary otherwise.
void save_matrix(const Eigen::MatrixXd& matrix, const std::filesystem::path& path,
                 MatrixEncoding encoding = MatrixEncoding::kAuto);

/// One recorded run: N x T states and, optionally, M x (T-1) controls.
struct Sequence {
    Eigen::MatrixXd states;
    Eigen::MatrixXd controls;  // 0 x (T-1) when the system has no inputs
};

/**
 * A collection of runs sharing state and control dimensions. A control
 * matrix with T columns (one per state) is trimmed to T-1 on construction,
 * since the final state has no successor to consume it.
 */
class TimeSeriesDataset {
public:
    explicit TimeSeriesDataset(std::vector<Sequence> sequences);

    const std::vector<Sequence>& sequences() const { return sequences_; }
    Eigen::Index state_dim() const { return state_dim_; }
    Eigen::Index control_dim() const { return control_dim_; }
    /// Number of trailing control columns dropped during normalization.
    int trimmed_controls() const { return trimmed_controls_; }

private:
    std::vector<Sequence> sequences_;
    Eigen::Index state_dim_ = 0;
    Eigen::Index control_dim_ = 0;
    int trimmed_controls_ = 0;
};

/// Column j of Y is the successor of column j of X under control column j of U.
class RegressionData {
public:
    RegressionData(Eigen::MatrixXd X, Eigen::MatrixXd Y, Eigen::MatrixXd U = {});

    const Eigen::MatrixXd& X() const { return X_; }
    const Eigen::MatrixXd& Y() const { return Y_; }
    /// M x p; zero rows when there are no inputs.
    const Eigen::MatrixXd& U() const { return U_; }

    Eigen::Index state_dim() const { return X_.rows(); }
    Eigen::Index control_dim() const { return U_.rows(); }
    Eigen::Index pairs() const { return X_.cols(); }
    bool has_controls() const { return U_.rows() > 0; }

private:
    Eigen::MatrixXd X_;
    Eigen::MatrixXd Y_;
    Eigen::MatrixXd U_;
};

struct PairSample {
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd u;  // empty when there are no inputs
};

/// Pairs never straddle sequence boundaries.
RegressionData build_pairs_contiguous(const TimeSeriesDataset& dataset);

/// Columns in the given order; no time continuity assumed.
RegressionData build_pairs_list(const std::vector<PairSample>& pairs);

enum class MethodTag { kLs, kSoc };

std::string to_string(MethodTag tag);
MethodTag method_from_string(const std::string& name);

struct LdsModel {
    Eigen::MatrixXd A;  // N x N
    Eigen::MatrixXd B;  // N x M, M may be 0
    double spectral_radius = 0.0;
    MethodTag method = MethodTag::kLs;
    std::optional<SubspaceBasis> subspace;

    Eigen::Index state_dim() const { return A.rows(); }
    Eigen::Index control_dim() const { return B.cols(); }
    bool has_controls() const { return B.cols() > 0; }

    /// Builds a model and computes its spectral radius. B may be empty.
    static LdsModel make(Eigen::MatrixXd A, Eigen::MatrixXd B, MethodTag method);
};

inline constexpr const char* kModelFormat = "slds-model/1";

nlohmann::json model_to_json(const LdsModel& model);
/// Validates schema and invariants (stored radius within 1e-9 of rho(A)).
LdsModel model_from_json(const nlohmann::json& doc);

void save_model(const LdsModel& model, const std::filesystem::path& path);
LdsModel load_model(const std::filesystem::path& path);

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m);
/// Row-major nested arrays; `rows`/`cols` give the shape for empty arrays.
Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& field);

}  // namespace slds

#endif  // SLDS_DATAIO_HPP
