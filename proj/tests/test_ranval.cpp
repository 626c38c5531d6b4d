#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <boost/math/distributions/chi_squared.hpp>

#include "hqx/pqcprov.hpp"
#include "hqx/ranval.hpp"
#include "test_util.hpp"

using namespace hqx;
using ranval::RestartMatrix;

namespace {

// O(n^2) dynamic-programming oracle: longest common extension over all
// suffix pairs.
std::size_t lrs_oracle(const BitString& bits) {
    const std::size_t n = bits.size();
    std::vector<std::size_t> next(n + 1, 0), current(n + 1, 0);
    std::size_t best = 0;
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = n; j-- > i + 1;) {
            current[j] = bits[i] == bits[j] ? next[j + 1] + 1 : 0;
            best = std::max(best, current[j]);
        }
        std::swap(next, current);
    }
    return best;
}

Bytes row_from_bits(const BitString& bits) {
    return pack_bits(bits);
}

BitString random_row_bits(RandomSource& rng) {
    BitString bits;
    for (int i = 0; i < 256; ++i) bits.push_back(rng.next_bit() ? '1' : '0');
    return bits;
}

RestartMatrix matrix_from_rows(const std::vector<Bytes>& rows) {
    RestartMatrix matrix;
    matrix.rows = rows.size();
    for (const Bytes& row : rows) matrix.bits.insert(matrix.bits.end(), row.begin(), row.end());
    return matrix;
}

}  // namespace

TEST_CASE("mcv of a balanced row") {
    BitString bits;
    for (int i = 0; i < 256; ++i) bits.push_back(i % 2 == 0 ? '1' : '0');
    const auto result = ranval::mcv_test(row_from_bits(bits));
    CHECK(result.mcv == 128);
    CHECK(result.min_entropy == doctest::Approx(1.0));
    CHECK(result.p_value == 1.0);
    CHECK(result.pass);
}

TEST_CASE("mcv of the all-zero row") {
    const auto result = ranval::mcv_test(Bytes(32, 0));
    CHECK(result.mcv == 256);
    CHECK(result.min_entropy == doctest::Approx(0.0));
    CHECK(result.p_value < 0.000005);
    CHECK_FALSE(result.pass);
}

TEST_CASE("mcv of a row with 150 ones") {
    BitString bits(256, '0');
    for (int i = 0; i < 150; ++i) bits[static_cast<std::size_t>(i)] = '1';
    const auto result = ranval::mcv_test(row_from_bits(bits));
    CHECK(result.mcv == 150);
    CHECK(result.min_entropy == doctest::Approx(-std::log2(150.0 / 256.0)).epsilon(1e-12));
    // Brute-force count agrees.
    std::size_t ones = 0;
    for (char c : bits) ones += c == '1';
    CHECK(result.mcv == std::max(ones, 256 - ones));
}

TEST_CASE("mcv p-values match the exact-fraction oracle") {
    const auto vectors = pqc::load_kat_lines(test::data_path("mcv_p_kat.txt"));
    REQUIRE(vectors.size() == 129);
    for (const auto& fields : vectors) {
        REQUIRE(fields.size() == 2);
        const std::size_t mcv = std::stoul(fields[0]);
        const double expected = std::stod(fields[1]);
        CAPTURE(mcv);
        if (expected > 1e-280) {
            CHECK(ranval::mcv_p_value(mcv) == doctest::Approx(expected).epsilon(1e-10));
        } else {
            CHECK(ranval::mcv_p_value(mcv) <= 1e-280);
        }
    }
}

TEST_CASE("mcv p-value is 1 at 128 and strictly decreasing") {
    CHECK(ranval::mcv_p_value(128) == 1.0);
    double previous = 2.0;
    for (std::size_t mcv = 128; mcv <= 200; ++mcv) {
        const double p = ranval::mcv_p_value(mcv);
        CHECK(p < previous);
        previous = p;
    }
}

TEST_CASE("independence statistic on hand-computed rows") {
    // Every block 16/16: statistic 0.
    BitString balanced;
    for (int i = 0; i < 256; ++i) balanced.push_back(i % 2 == 0 ? '1' : '0');
    const auto zero = ranval::independence_test(row_from_bits(balanced));
    CHECK(zero.statistic == doctest::Approx(0.0));
    CHECK(zero.dof == 7);
    CHECK(zero.pass);

    // One all-zero block among balanced blocks: (32-16)^2/16 + (0-16)^2/16 = 32.
    BitString one_bad;
    for (int i = 0; i < 32; ++i) one_bad.push_back('0');
    for (int i = 32; i < 256; ++i) one_bad.push_back(i % 2 == 0 ? '1' : '0');
    const auto bad = ranval::independence_test(row_from_bits(one_bad));
    CHECK(bad.statistic == doctest::Approx(32.0));
    CHECK_FALSE(bad.pass);
    CHECK(ranval::kIndependenceChiSquareThreshold == doctest::Approx(24.322));
}

TEST_CASE("goodness-of-fit statistic on hand-computed rows") {
    // 32 of each 2-bit pattern: statistic 0.
    BitString uniform;
    for (int i = 0; i < 32; ++i) uniform += "00011011";
    const auto zero = ranval::gf_test(row_from_bits(uniform));
    CHECK(zero.statistic == doctest::Approx(0.0));
    CHECK(zero.dof == 2);
    CHECK(zero.pass);

    // Counts (64, 0, 32, 32): 32^2/32 + 32^2/32 = 64.
    BitString skewed;
    for (int i = 0; i < 64; ++i) skewed += "00";
    for (int i = 0; i < 32; ++i) skewed += "10";
    for (int i = 0; i < 32; ++i) skewed += "11";
    const auto bad = ranval::gf_test(row_from_bits(skewed));
    CHECK(bad.statistic == doctest::Approx(64.0));
    CHECK_FALSE(bad.pass);
    CHECK(ranval::kGfChiSquareThreshold == doctest::Approx(13.816));
}

TEST_CASE("chi-square survival values match scipy") {
    const auto vectors = pqc::load_kat_lines(test::data_path("chi2_sf_kat.txt"));
    REQUIRE(!vectors.empty());
    for (const auto& fields : vectors) {
        REQUIRE(fields.size() == 3);
        const int dof = std::stoi(fields[0]);
        const double stat = std::stod(fields[1]);
        const double expected = std::stod(fields[2]);
        // The suite computes p-values through this survival function; pin it
        // against the scipy-generated values.
        const boost::math::chi_squared dist(dof);
        const double got = boost::math::cdf(boost::math::complement(dist, stat));
        CHECK(got == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("lrs on the all-zero row") {
    const auto result = ranval::lrs_test(Bytes(32, 0));
    CHECK(result.longest_run_length == 255);
    CHECK_FALSE(result.pass);
}

TEST_CASE("lrs agrees with the quadratic oracle on random rows") {
    DeterministicRandom rng(71);
    for (int trial = 0; trial < 100; ++trial) {
        const BitString bits = random_row_bits(rng);
        const auto result = ranval::lrs_test(row_from_bits(bits));
        CAPTURE(trial);
        CHECK(result.longest_run_length == lrs_oracle(bits));
    }
}

TEST_CASE("lrs detects a planted 30-bit duplicate") {
    DeterministicRandom rng(72);
    BitString bits = random_row_bits(rng);
    // Plant the same 30-bit pattern at positions 10 and 120.
    for (int i = 0; i < 30; ++i) {
        const char c = rng.next_bit() ? '1' : '0';
        bits[static_cast<std::size_t>(10 + i)] = c;
        bits[static_cast<std::size_t>(120 + i)] = c;
    }
    const auto result = ranval::lrs_test(row_from_bits(bits));
    CHECK(result.longest_run_length >= 30);
    CHECK_FALSE(result.pass);
    CHECK(result.longest_run_length == lrs_oracle(bits));
}

TEST_CASE("row tests reject wrong lengths") {
    CHECK_THROWS_AS(ranval::mcv_test(Bytes(31, 0)), Error);
    CHECK_THROWS_AS(ranval::independence_test(Bytes(33, 0)), Error);
    CHECK_THROWS_AS(ranval::gf_test(Bytes(0, 0)), Error);
    CHECK_THROWS_AS(ranval::lrs_test(Bytes(16, 0)), Error);
}

TEST_CASE("collect_matrix shapes and failure reporting") {
    DeterministicRandom rng(73);
    const auto matrix = ranval::collect_matrix([&](std::size_t) { return rng.bytes(32); }, 10);
    CHECK(matrix.rows == 10);
    CHECK(matrix.bits.size() == 320);

    const auto constant = ranval::collect_matrix([](std::size_t) { return Bytes(32, 0); }, 1);
    CHECK(constant.rows == 1);
    CHECK(ranval::mcv_test(constant.row(0)).mcv == 256);

    CHECK_THROWS_WITH_AS(
        (void)ranval::collect_matrix(
            [](std::size_t r) -> Bytes {
                if (r == 3) throw Error("source exhausted");
                return Bytes(32, 1);
            },
            10),
        "collect_matrix: source failed at row 3: source exhausted", Error);
    CHECK_THROWS_AS((void)ranval::collect_matrix([](std::size_t) { return Bytes(31, 0); }, 1),
                    Error);
}

TEST_CASE("run_suite flags a planted failing row and is deterministic") {
    DeterministicRandom rng(74);
    std::vector<Bytes> rows;
    for (int r = 0; r < 20; ++r) rows.push_back(rng.bytes(32));
    RestartMatrix clean = matrix_from_rows(rows);

    rows[7] = Bytes(32, 0);  // plant a degenerate row
    RestartMatrix planted = matrix_from_rows(rows);

    const auto planted_report = ranval::run_suite(planted);
    CHECK_FALSE(planted_report.overall_pass);
    REQUIRE(!planted_report.failing_rows.empty());
    CHECK(std::find(planted_report.failing_rows.begin(), planted_report.failing_rows.end(), 7) !=
          planted_report.failing_rows.end());
    CHECK(planted_report.rows == 20);
    CHECK(planted_report.mcv.size() == 20);

    // Byte-identical reports for identical matrices.
    const std::string text_a = ranval::report_to_text(ranval::run_suite(clean));
    const std::string text_b = ranval::report_to_text(ranval::run_suite(clean));
    CHECK(text_a == text_b);
    CHECK(text_a.find("overall,") != std::string::npos);

    const std::string json = ranval::report_to_json(planted_report);
    CHECK(json.find("\"overall_pass\": false") != std::string::npos);
}

TEST_CASE("matrix file formats roundtrip") {
    DeterministicRandom rng(75);
    std::vector<Bytes> rows;
    for (int r = 0; r < 5; ++r) rows.push_back(rng.bytes(32));
    const RestartMatrix matrix = matrix_from_rows(rows);

    const std::string bin_path = "hqx_test_matrix.bin";
    const std::string hex_path = "hqx_test_matrix.hex";
    ranval::save_matrix_binary(matrix, bin_path);
    ranval::save_matrix_hex(matrix, hex_path);
    const auto from_bin = ranval::load_matrix_binary(bin_path);
    const auto from_hex = ranval::load_matrix_hex(hex_path);
    CHECK(from_bin.bits == matrix.bits);
    CHECK(from_hex.bits == matrix.bits);
    CHECK(from_bin.rows == 5);
    std::remove(bin_path.c_str());
    std::remove(hex_path.c_str());

    CHECK_THROWS_AS(ranval::load_matrix_binary("does_not_exist.bin"), Error);
}

TEST_CASE("five number summary with interpolation") {
    const auto stats = ranval::five_number_summary({4.0, 1.0, 3.0, 2.0, 5.0});
    CHECK(stats.min == 1.0);
    CHECK(stats.q1 == 2.0);
    CHECK(stats.median == 3.0);
    CHECK(stats.q3 == 4.0);
    CHECK(stats.max == 5.0);
    const auto interpolated = ranval::five_number_summary({0.0, 1.0});
    CHECK(interpolated.q1 == doctest::Approx(0.25));
    CHECK(interpolated.median == doctest::Approx(0.5));
}

TEST_CASE("min-entropy is one exactly at mcv 128 and decreases with mcv") {
    double previous = 2.0;
    for (std::size_t mcv = 128; mcv <= 256; mcv += 16) {
        const double entropy = -std::log2(static_cast<double>(mcv) / 256.0);
        CHECK(entropy < previous);
        CHECK(entropy >= 0.0);
        CHECK(entropy <= 1.0);
        previous = entropy;
    }
}
