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
#include "slds/dataio.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "slds/errors.hpp"
#include "slds/lds_core.hpp"

namespace slds {
namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return fields;
}

std::uint64_t parse_dim(const std::string& field, const std::string& where) {
    std::uint64_t value = 0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || field.empty())
        throw InputError(where + ": malformed header field '" + field + "'");
    return value;
}

double parse_value(const std::string& field, std::size_t row, std::size_t col,
                   const std::string& where) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = field.data() + field.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || field.empty())
        throw InputError(where + ": cannot parse value '" + field + "' at row " +
                         std::to_string(row) + ", col " + std::to_string(col));
    if (!std::isfinite(value))
        throw InputError(where + ": non-finite value at row " + std::to_string(row) +
                         ", col " + std::to_string(col));
    return value;
}

Eigen::MatrixXd load_csv(std::istream& in, const std::string& where) {
    std::string line;
    if (!std::getline(in, line)) throw InputError(where + ": empty file, missing 'rows,cols' header");
    const auto header = split_commas(trim(line));
    if (header.size() != 2) throw InputError(where + ": header must be 'rows,cols'");
    const auto rows = parse_dim(header[0], where);
    const auto cols = parse_dim(header[1], where);

    Eigen::MatrixXd m(rows, cols);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        const auto content = trim(line);
        if (content.empty()) continue;
        if (row >= rows)
            throw InputError(where + ": more than " + std::to_string(rows) + " data rows");
        const auto fields = split_commas(content);
        if (fields.size() != cols)
            throw InputError(where + ": row " + std::to_string(row) + " has " +
                             std::to_string(fields.size()) + " values, expected " +
                             std::to_string(cols));
        for (std::size_t c = 0; c < cols; ++c) m(row, c) = parse_value(fields[c], row, c, where);
        ++row;
    }
    if (row != rows)
        throw InputError(where + ": expected " + std::to_string(rows) + " rows, found " +
                         std::to_string(row));
    return m;
}

template <typename T>
T to_little_endian(T value) {
    if constexpr (std::endian::native == std::endian::big) {
        unsigned char bytes[sizeof(T)];
        std::memcpy(bytes, &value, sizeof(T));
        std::reverse(bytes, bytes + sizeof(T));
        std::memcpy(&value, bytes, sizeof(T));
    }
    return value;
}

template <typename T>
T read_le(std::istream& in, const std::string& where, const char* what) {
    T value;
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(T)))
        throw InputError(where + ": truncated file while reading " + what);
    return to_little_endian(value);
}

template <typename T>
void write_le(std::ostream& out, T value) {
    value = to_little_endian(value);
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

Eigen::MatrixXd load_binary(std::istream& in, const std::string& where) {
    char magic[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kBinaryMagic, 8) != 0)
        throw InputError(where + ": missing SLDSMAT1 magic");
    const auto rows = read_le<std::uint64_t>(in, where, "rows");
    const auto cols = read_le<std::uint64_t>(in, where, "cols");
    constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 40;
    if (rows != 0 && cols > kMaxElements / rows)
        throw InputError(where + ": implausible dimensions");

    Eigen::MatrixXd m(rows, cols);
    for (std::uint64_t r = 0; r < rows; ++r) {
        for (std::uint64_t c = 0; c < cols; ++c) {
            const double v = read_le<double>(in, where, "values");
            if (!std::isfinite(v))
                throw InputError(where + ": non-finite value at row " + std::to_string(r) +
                                 ", col " + std::to_string(c));
            m(r, c) = v;
        }
    }
    if (in.peek() != std::char_traits<char>::eof())
        throw InputError(where + ": trailing bytes after " + std::to_string(rows * cols) +
                         " values");
    return m;
}

bool has_text_extension(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return ext == ".csv" || ext == ".txt";
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

Eigen::MatrixXd load_matrix(const std::filesystem::path& path, MatrixEncoding encoding) {
    const std::string where = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(where + ": cannot open file");

    if (encoding == MatrixEncoding::kAuto) {
        char magic[8] = {};
        in.read(magic, 8);
        const bool binary = in.gcount() == 8 && std::memcmp(magic, kBinaryMagic, 8) == 0;
        in.clear();
        in.seekg(0);
        encoding = binary ? MatrixEncoding::kBinary : MatrixEncoding::kCsv;
    }
    return encoding == MatrixEncoding::kBinary ? load_binary(in, where) : load_csv(in, where);
}

void save_matrix(const Eigen::MatrixXd& matrix, const std::filesystem::path& path,
                 MatrixEncoding encoding) {
    if (encoding == MatrixEncoding::kAuto)
        encoding = has_text_extension(path) ? MatrixEncoding::kCsv : MatrixEncoding::kBinary;

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path.string() + ": cannot open for writing");

    if (encoding == MatrixEncoding::kBinary) {
        out.write(kBinaryMagic, 8);
        write_le<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.rows()));
        write_le<std::uint64_t>(out, static_cast<std::uint64_t>(matrix.cols()));
        for (Eigen::Index r = 0; r < matrix.rows(); ++r)
            for (Eigen::Index c = 0; c < matrix.cols(); ++c) write_le<double>(out, matrix(r, c));
    } else {
        out << matrix.rows() << ',' << matrix.cols() << '\n';
        for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
            for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
                if (c) out << ',';
                out << format_double(matrix(r, c));
            }
            out << '\n';
        }
    }
    if (!out.flush()) throw InputError(path.string() + ": write failed");
}

TimeSeriesDataset::TimeSeriesDataset(std::vector<Sequence> sequences)
    : sequences_(std::move(sequences)) {
    if (sequences_.empty()) throw InputError("dataset has no sequences");
    state_dim_ = sequences_.front().states.rows();
    control_dim_ = sequences_.front().controls.rows();
    for (std::size_t i = 0; i < sequences_.size(); ++i) {
        auto& seq = sequences_[i];
        const auto label = "sequence " + std::to_string(i);
        const auto steps = seq.states.cols();
        if (seq.states.rows() != state_dim_)
            throw InputError(label + ": state dimension " + std::to_string(seq.states.rows()) +
                             " differs from " + std::to_string(state_dim_));
        if (steps < 2) throw InputError(label + ": needs at least 2 states");
        if (seq.controls.rows() != control_dim_)
            throw InputError(label + ": control dimension mismatch");
        if (control_dim_ == 0) {
            seq.controls.resize(0, steps - 1);
            continue;
        }
        if (seq.controls.cols() == steps) {
            seq.controls.conservativeResize(Eigen::NoChange, steps - 1);
            ++trimmed_controls_;
            std::cerr << "warning: " << label
                      << ": dropping control for the final state (no successor)\n";
        } else if (seq.controls.cols() != steps - 1) {
            throw InputError(label + ": expected " + std::to_string(steps - 1) + " or " +
                             std::to_string(steps) + " control columns, got " +
                             std::to_string(seq.controls.cols()));
        }
    }
}

RegressionData::RegressionData(Eigen::MatrixXd X, Eigen::MatrixXd Y, Eigen::MatrixXd U)
    : X_(std::move(X)), Y_(std::move(Y)), U_(std::move(U)) {
    if (X_.rows() != Y_.rows() || X_.cols() != Y_.cols())
        throw InputError("X and Y must have identical shape");
    if (X_.cols() < 1) throw InputError("regression data needs at least one pair");
    if (U_.size() == 0) U_.resize(0, X_.cols());
    if (U_.cols() != X_.cols()) throw InputError("U must have one column per pair");
}

RegressionData build_pairs_contiguous(const TimeSeriesDataset& dataset) {
    Eigen::Index total = 0;
    for (const auto& seq : dataset.sequences()) total += seq.states.cols() - 1;

    const auto n = dataset.state_dim();
    const auto m = dataset.control_dim();
    Eigen::MatrixXd X(n, total), Y(n, total), U(m, total);
    Eigen::Index offset = 0;
    for (const auto& seq : dataset.sequences()) {
        const auto count = seq.states.cols() - 1;
        X.middleCols(offset, count) = seq.states.leftCols(count);
        Y.middleCols(offset, count) = seq.states.rightCols(count);
        if (m > 0) U.middleCols(offset, count) = seq.controls;
        offset += count;
    }
    return RegressionData(std::move(X), std::move(Y), std::move(U));
}

RegressionData build_pairs_list(const std::vector<PairSample>& pairs) {
    if (pairs.empty()) throw InputError("pair list is empty");
    const auto n = pairs.front().x.size();
    const auto m = pairs.front().u.size();
    const auto p = static_cast<Eigen::Index>(pairs.size());
    Eigen::MatrixXd X(n, p), Y(n, p), U(m, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto& pair = pairs[j];
        if (pair.x.size() != n || pair.y.size() != n || pair.u.size() != m)
            throw InputError("pair " + std::to_string(j) + ": dimension mismatch");
        X.col(j) = pair.x;
        Y.col(j) = pair.y;
        if (m > 0) U.col(j) = pair.u;
    }
    return RegressionData(std::move(X), std::move(Y), std::move(U));
}

std::string to_string(MethodTag tag) { return tag == MethodTag::kLs ? "ls" : "soc"; }

MethodTag method_from_string(const std::string& name) {
    if (name == "ls") return MethodTag::kLs;
    if (name == "soc") return MethodTag::kSoc;
    throw InputError("unknown method '" + name + "' (expected ls or soc)");
}

LdsModel LdsModel::make(Eigen::MatrixXd A, Eigen::MatrixXd B, MethodTag method) {
    if (A.rows() != A.cols()) throw InputError("A must be square");
    if (B.size() == 0) B.resize(A.rows(), 0);
    if (B.rows() != A.rows()) throw InputError("B must have as many rows as A");
    LdsModel model;
    model.spectral_radius = slds::spectral_radius(A);
    model.A = std::move(A);
    model.B = std::move(B);
    model.method = method;
    return model;
}

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, Eigen::Index rows, Eigen::Index cols,
                                 const std::string& field) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
        throw InputError("model field '" + field + "' must be an array of " +
                         std::to_string(rows) + " rows");
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = j[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw InputError("model field '" + field + "' row " + std::to_string(r) + " must have " +
                             std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c) {
            if (!row[c].is_number())
                throw InputError("model field '" + field + "' has a non-numeric entry");
            m(r, c) = row[c].get<double>();
            if (!std::isfinite(m(r, c)))
                throw InputError("model field '" + field + "' has a non-finite entry");
        }
    }
    return m;
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
    auto out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& j, Eigen::Index size,
                                 const std::string& field) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != size)
        throw InputError("model field '" + field + "' must have " + std::to_string(size) +
                         " entries");
    Eigen::VectorXd v(size);
    for (Eigen::Index i = 0; i < size; ++i) {
        if (!j[i].is_number()) throw InputError("model field '" + field + "' is not numeric");
        v(i) = j[i].get<double>();
    }
    return v;
}

Eigen::Index dim_field(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_unsigned())
        throw InputError(std::string("model field '") + key + "' missing or not a count");
    return doc[key].get<Eigen::Index>();
}

}  // namespace

nlohmann::json model_to_json(const LdsModel& model) {
    nlohmann::json doc;
    doc["format"] = kModelFormat;
    doc["method"] = to_string(model.method);
    doc["N"] = model.state_dim();
    doc["M"] = model.control_dim();
    doc["spectral_radius"] = model.spectral_radius;
    doc["A"] = matrix_to_json(model.A);
    if (model.has_controls()) doc["B"] = matrix_to_json(model.B);
    if (model.subspace) {
        const auto& s = *model.subspace;
        nlohmann::json sub;
        sub["original_dim"] = s.original_dim();
        sub["reduced_dim"] = s.reduced_dim();
        sub["basis"] = matrix_to_json(s.basis);
        sub["singular_values"] = vector_to_json(s.singular_values);
        if (s.centered()) sub["mean"] = vector_to_json(s.mean);
        doc["subspace"] = std::move(sub);
    }
    return doc;
}

LdsModel model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw InputError("model document must be a JSON object");
    if (doc.value("format", std::string{}) != kModelFormat)
        throw InputError(std::string("model format must be '") + kModelFormat + "'");
    if (!doc.contains("method") || !doc["method"].is_string())
        throw InputError("model field 'method' missing");
    if (!doc.contains("spectral_radius") || !doc["spectral_radius"].is_number())
        throw InputError("model field 'spectral_radius' missing");

    const auto n = dim_field(doc, "N");
    const auto m = dim_field(doc, "M");
    if (!doc.contains("A")) throw InputError("model field 'A' missing");
    Eigen::MatrixXd A = matrix_from_json(doc["A"], n, n, "A");
    Eigen::MatrixXd B(n, 0);
    if (m > 0) {
        if (!doc.contains("B")) throw InputError("model field 'B' missing while M > 0");
        B = matrix_from_json(doc["B"], n, m, "B");
    }

    LdsModel model = LdsModel::make(std::move(A), std::move(B),
                                    method_from_string(doc["method"].get<std::string>()));
    const double stored = doc["spectral_radius"].get<double>();
    if (std::abs(stored - model.spectral_radius) > 1e-9 * std::max(1.0, model.spectral_radius))
        throw InputError("stored spectral_radius " + format_double(stored) +
                         " is inconsistent with A (recomputed " +
                         format_double(model.spectral_radius) + ")");
    model.spectral_radius = stored;
    if (model.method == MethodTag::kSoc && stored > 1.0 + kStabilityTolerance)
        throw InputError("soc model with spectral radius above one");

    if (doc.contains("subspace")) {
        const auto& sub = doc["subspace"];
        const auto original = dim_field(sub, "original_dim");
        const auto reduced = dim_field(sub, "reduced_dim");
        if (reduced != n) throw InputError("subspace reduced_dim must equal N");
        SubspaceBasis basis;
        basis.basis = matrix_from_json(sub["basis"], original, reduced, "subspace.basis");
        basis.singular_values =
            vector_from_json(sub["singular_values"], reduced, "subspace.singular_values");
        if (sub.contains("mean")) basis.mean = vector_from_json(sub["mean"], original, "subspace.mean");
        validate_basis(basis);
        model.subspace = std::move(basis);
    }
    return model;
}

void save_model(const LdsModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw InputError(path.string() + ": cannot open for writing");
    out << model_to_json(model).dump(2) << '\n';
    if (!out.flush()) throw InputError(path.string() + ": write failed");
}

LdsModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open file");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path.string() + ": invalid JSON: " + e.what());
    }
    return model_from_json(doc);
}

}  // namespace slds
