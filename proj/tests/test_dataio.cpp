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
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

#include "slds/dataio.hpp"
#include "slds/errors.hpp"
#include "slds/lds_core.hpp"
#include "slds/random.hpp"
#include "slds/soc.hpp"
#include "slds/synthetic.hpp"

using namespace slds;
using slds::test::TempDir;

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("csv matrices load from the header-plus-rows format") {
    TempDir dir;
    SUBCASE("identity") {
        const auto m = load_matrix(dir.write("i.csv", "2,2\n1,0\n0,1"));
        CHECK(m == Eigen::MatrixXd::Identity(2, 2));
    }
    SUBCASE("single row echoes the input") {
        const auto m = load_matrix(dir.write("r.csv", "1,3\n0.5,-0.2,3.0\n"), MatrixEncoding::kCsv);
        REQUIRE(m.rows() == 1);
        REQUIRE(m.cols() == 3);
        CHECK(m(0, 0) == 0.5);
        CHECK(m(0, 1) == -0.2);
        CHECK(m(0, 2) == 3.0);
    }
    SUBCASE("windows line endings and blank lines are tolerated") {
        const auto m = load_matrix(dir.write("w.csv", "2,1\r\n4\r\n\r\n5\r\n"));
        CHECK(m(1, 0) == 5.0);
    }
}

TEST_CASE("csv load errors name the position") {
    TempDir dir;
    CHECK(error_of([&] { load_matrix(dir.write("h.csv", "2;2\n1,0\n0,1")); }).find("header") !=
          std::string::npos);
    CHECK(error_of([&] { load_matrix(dir.write("c.csv", "2,2\n1,0\n0")); }).find("row 1") !=
          std::string::npos);
    CHECK(error_of([&] { load_matrix(dir.write("n.csv", "2,2\n1,0\n")); }).find("expected 2 rows") !=
          std::string::npos);
    CHECK(error_of([&] { load_matrix(dir.write("x.csv", "1,2\n1,3\n4,4\n")); }).find("more than") !=
          std::string::npos);
    const auto nan = error_of([&] { load_matrix(dir.write("nan.csv", "2,2\n1,0\n0,nan")); });
    CHECK(nan.find("row 1, col 1") != std::string::npos);
    const auto inf = error_of([&] { load_matrix(dir.write("inf.csv", "1,2\ninf,0")); });
    CHECK(inf.find("row 0, col 0") != std::string::npos);
    CHECK(error_of([&] { load_matrix(dir.write("t.csv", "1,1\n1.5abc")); }).find("1.5abc") !=
          std::string::npos);
    CHECK_THROWS_AS(load_matrix(dir.file("missing.csv")), InputError);
}

TEST_CASE("binary matrices round-trip bit-exactly") {
    TempDir dir;
    SplitMix64 rng(7);
    SUBCASE("random 5x4") {
        const Eigen::MatrixXd m = rng.normal_matrix(5, 4);
        save_matrix(m, dir.file("m.bin"), MatrixEncoding::kBinary);
        CHECK(test::bit_equal(load_matrix(dir.file("m.bin")), m));
    }
    SUBCASE("random 10x10 with extreme magnitudes") {
        Eigen::MatrixXd m = rng.normal_matrix(10, 10);
        m(0, 0) = 1e-310;  // subnormal
        m(1, 1) = -1.7976931348623157e308;
        m(2, 2) = -0.0;
        save_matrix(m, dir.file("m.bin"));
        CHECK(test::bit_equal(load_matrix(dir.file("m.bin"), MatrixEncoding::kBinary), m));
    }
    SUBCASE("3x3 identity occupies magic + two u64 + 9 doubles") {
        save_matrix(Eigen::MatrixXd::Identity(3, 3), dir.file("i.bin"), MatrixEncoding::kBinary);
        const auto bytes = read_file(dir.file("i.bin"));
        CHECK(bytes.size() == 8 + 8 + 8 + 72);
        CHECK(bytes.substr(0, 8) == "SLDSMAT1");
        CHECK(static_cast<unsigned char>(bytes[8]) == 3);  // little-endian rows
        CHECK(static_cast<unsigned char>(bytes[16]) == 3);
    }
    SUBCASE("truncated and mislabelled files are rejected") {
        save_matrix(Eigen::MatrixXd::Ones(2, 2), dir.file("t.bin"), MatrixEncoding::kBinary);
        auto bytes = read_file(dir.file("t.bin"));
        dir.write("short.bin", bytes.substr(0, bytes.size() - 3));
        CHECK_THROWS_AS(load_matrix(dir.file("short.bin")), InputError);
        dir.write("long.bin", bytes + "xx");
        CHECK_THROWS_AS(load_matrix(dir.file("long.bin")), InputError);
        CHECK_THROWS_AS(load_matrix(dir.write("bad.bin", "NOTMAGIC"), MatrixEncoding::kBinary),
                        InputError);
    }
}

TEST_CASE("csv save writes the documented text and round-trips exactly") {
    TempDir dir;
    Eigen::MatrixXd m(2, 2);
    m << 1.5, 2.5, 3.5, 4.5;
    save_matrix(m, dir.file("m.csv"));
    CHECK(read_file(dir.file("m.csv")) == "2,2\n1.5,2.5\n3.5,4.5\n");

    SplitMix64 rng(11);
    const Eigen::MatrixXd r = rng.normal_matrix(10, 10) * 1e3;
    save_matrix(r, dir.file("r.csv"));
    CHECK(test::bit_equal(load_matrix(dir.file("r.csv")), r));
}

TEST_CASE("datasets normalize control columns") {
    Sequence seq;
    seq.states = Eigen::MatrixXd::Random(2, 4);
    seq.controls = Eigen::MatrixXd::Random(1, 4);
    const Eigen::MatrixXd first_three = seq.controls.leftCols(3);
    TimeSeriesDataset ds({seq});
    CHECK(ds.trimmed_controls() == 1);
    CHECK(ds.sequences()[0].controls == first_three);

    Sequence bad = seq;
    bad.controls = Eigen::MatrixXd::Random(1, 2);
    CHECK_THROWS_AS(TimeSeriesDataset({bad}), InputError);

    Sequence short_seq;
    short_seq.states = Eigen::MatrixXd::Random(2, 1);
    CHECK_THROWS_AS(TimeSeriesDataset({short_seq}), InputError);

    Sequence other_dim;
    other_dim.states = Eigen::MatrixXd::Random(3, 4);
    other_dim.controls = Eigen::MatrixXd::Random(1, 3);
    CHECK_THROWS_AS(TimeSeriesDataset({seq, other_dim}), InputError);
    CHECK_THROWS_AS(TimeSeriesDataset({}), InputError);
}

TEST_CASE("contiguous pairs follow the sequence layout") {
    const Eigen::Vector2d a(1, 2), b(3, 4), c(5, 6);
    SUBCASE("one sequence without controls") {
        Sequence seq;
        seq.states.resize(2, 3);
        seq.states << a, b, c;
        const auto data = build_pairs_contiguous(TimeSeriesDataset({seq}));
        REQUIRE(data.pairs() == 2);
        CHECK(data.X().col(0) == a);
        CHECK(data.X().col(1) == b);
        CHECK(data.Y().col(0) == b);
        CHECK(data.Y().col(1) == c);
        CHECK_FALSE(data.has_controls());
    }
    SUBCASE("controls align with predecessors") {
        Sequence seq;
        seq.states.resize(2, 3);
        seq.states << a, b, c;
        seq.controls.resize(1, 2);
        seq.controls << 10, 20;
        const auto data = build_pairs_contiguous(TimeSeriesDataset({seq}));
        CHECK(data.U()(0, 0) == 10);
        CHECK(data.X().col(0) == a);
        CHECK(data.U()(0, 1) == 20);
        CHECK(data.X().col(1) == b);
    }
    SUBCASE("pairs never straddle sequences") {
        SplitMix64 rng(3);
        std::vector<Sequence> seqs;
        Eigen::Index expected = 0;
        for (Eigen::Index len : {3, 4, 2, 7}) {
            Sequence s;
            s.states = rng.normal_matrix(3, len);
            s.controls = rng.normal_matrix(2, len - 1);
            expected += len - 1;
            seqs.push_back(s);
        }
        const auto data = build_pairs_contiguous(TimeSeriesDataset(seqs));
        CHECK(data.pairs() == expected);
        // Every column must be a consecutive pair inside one sequence.
        for (Eigen::Index j = 0; j < data.pairs(); ++j) {
            bool found = false;
            for (const auto& s : seqs)
                for (Eigen::Index t = 0; t + 1 < s.states.cols(); ++t)
                    found |= s.states.col(t) == data.X().col(j) &&
                             s.states.col(t + 1) == data.Y().col(j) &&
                             s.controls.col(t) == data.U().col(j);
            CHECK(found);
        }
        // The boundary pair (last of sequence 0, first of sequence 1) is absent.
        for (Eigen::Index j = 0; j < data.pairs(); ++j)
            CHECK_FALSE((data.X().col(j) == seqs[0].states.col(2) &&
                         data.Y().col(j) == seqs[1].states.col(0)));
    }
    SUBCASE("two sequences of length 3 and 4 give five pairs") {
        Sequence s1, s2;
        s1.states = Eigen::MatrixXd::Random(2, 3);
        s2.states = Eigen::MatrixXd::Random(2, 4);
        CHECK(build_pairs_contiguous(TimeSeriesDataset({s1, s2})).pairs() == 5);
    }
}

TEST_CASE("explicit pair lists") {
    SplitMix64 rng(5);
    std::vector<PairSample> pairs;
    for (int j = 0; j < 5; ++j)
        pairs.push_back({rng.normal_matrix(3, 1).col(0), rng.normal_matrix(3, 1).col(0),
                         rng.normal_matrix(1, 1).col(0)});

    SUBCASE("shuffling permutes the columns") {
        auto shuffled = pairs;
        std::reverse(shuffled.begin(), shuffled.end());
        std::swap(shuffled[0], shuffled[2]);
        const auto a = build_pairs_list(pairs);
        const auto b = build_pairs_list(shuffled);
        for (Eigen::Index j = 0; j < 5; ++j) {
            bool found = false;
            for (Eigen::Index k = 0; k < 5; ++k)
                found |= a.X().col(j) == b.X().col(k) && a.Y().col(j) == b.Y().col(k) &&
                         a.U().col(j) == b.U().col(k);
            CHECK(found);
        }
    }
    SUBCASE("singleton") { CHECK(build_pairs_list({pairs[0]}).pairs() == 1); }
    SUBCASE("dimension mismatch") {
        auto bad = pairs;
        bad[3].u = Eigen::VectorXd::Zero(2);
        CHECK_THROWS_AS(build_pairs_list(bad), InputError);
        CHECK_THROWS_AS(build_pairs_list({}), InputError);
    }
}

TEST_CASE("least squares on subsampled pairs does not depend on their order") {
    SplitMix64 rng(17);
    const Eigen::MatrixXd A = random_matrix_with_radius(rng, 3, 0.95);
    const Eigen::MatrixXd B = rng.normal_matrix(3, 1);
    const Sequence seq = simulate_sequence(rng, A, B, Eigen::VectorXd::Ones(3), 200, 0.05);

    std::vector<PairSample> ordered;
    for (Eigen::Index t = 0; t + 1 < 200; t += 7)
        ordered.push_back({seq.states.col(t), seq.states.col(t + 1), seq.controls.col(t)});
    auto shuffled = ordered;
    SplitMix64 perm(99);
    for (std::size_t i = shuffled.size() - 1; i > 0; --i)
        std::swap(shuffled[i], shuffled[perm.next() % (i + 1)]);

    const auto a = least_squares_fit(build_pairs_list(ordered));
    const auto b = least_squares_fit(build_pairs_list(shuffled));
    CHECK((a.A - b.A).norm() <= 1e-10);
    CHECK((a.B - b.B).norm() <= 1e-10);
}

TEST_CASE("model JSON") {
    TempDir dir;
    SUBCASE("scaled identity without inputs") {
        const auto model = LdsModel::make(0.5 * Eigen::MatrixXd::Identity(2, 2), {}, MethodTag::kLs);
        const auto doc = model_to_json(model);
        CHECK(doc["format"] == "slds-model/1");
        CHECK(doc["M"] == 0);
        CHECK(doc["N"] == 2);
        CHECK(doc["A"] == nlohmann::json::parse("[[0.5,0.0],[0.0,0.5]]"));
        CHECK_FALSE(doc.contains("B"));
        CHECK(doc["spectral_radius"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("soc fit round-trips bit-exactly, subspace included") {
        SplitMix64 rng(2);
        const Eigen::MatrixXd A = random_matrix_with_radius(rng, 3, 1.1);
        const auto data = random_pairs(rng, A, rng.normal_matrix(3, 2), 20, 0.1);
        FgmOptions opts;
        opts.k_max = 50;
        auto model = fgm_fit(data, opts).model;
        SubspaceBasis basis;
        basis.basis = Eigen::MatrixXd::Identity(5, 3);
        basis.singular_values = Eigen::Vector3d(3, 2, 1);
        basis.mean = Eigen::VectorXd::LinSpaced(5, 0, 1);
        model.subspace = basis;

        save_model(model, dir.file("m.json"));
        const auto back = load_model(dir.file("m.json"));
        CHECK(test::bit_equal(back.A, model.A));
        CHECK(test::bit_equal(back.B, model.B));
        CHECK(back.spectral_radius == model.spectral_radius);
        CHECK(back.method == MethodTag::kSoc);
        REQUIRE(back.subspace.has_value());
        CHECK(back.subspace->basis == basis.basis);
        CHECK(back.subspace->mean == basis.mean);
        CHECK(back.subspace->singular_values == basis.singular_values);
    }
    SUBCASE("tampered spectral radius is rejected") {
        auto doc = model_to_json(LdsModel::make(Eigen::MatrixXd::Identity(2, 2), {}, MethodTag::kLs));
        doc["spectral_radius"] = 0.1;
        dir.write("bad.json", doc.dump());
        CHECK_THROWS_AS(load_model(dir.file("bad.json")), InputError);
    }
    SUBCASE("schema violations") {
        auto good = model_to_json(LdsModel::make(Eigen::MatrixXd::Identity(2, 2), {}, MethodTag::kLs));
        auto no_format = good;
        no_format.erase("format");
        CHECK_THROWS_AS(model_from_json(no_format), InputError);
        auto short_row = good;
        short_row["A"][1] = nlohmann::json::array({1.0});
        CHECK_THROWS_AS(model_from_json(short_row), InputError);
        auto missing_b = good;
        missing_b["M"] = 1;
        CHECK_THROWS_AS(model_from_json(missing_b), InputError);
        auto unstable_soc =
            model_to_json(LdsModel::make(2.0 * Eigen::MatrixXd::Identity(2, 2), {}, MethodTag::kSoc));
        CHECK_THROWS_AS(model_from_json(unstable_soc), InputError);
        dir.write("garbage.json", "{not json");
        CHECK_THROWS_AS(load_model(dir.file("garbage.json")), InputError);
    }
}
