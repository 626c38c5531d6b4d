// Randomness validation over a restart matrix of 256-bit rows: most-common-
// value min-entropy with an exact binomial p-value, an 8-block independence
// chi-square test, a 2-bit goodness-of-fit chi-square test, and the longest-
// repeated-substring test. Thresholds follow the source procedure: MCV
// p-value >= 0.000005; chi-square <= 24.322 at 7 degrees of freedom for
// independence; chi-square <= 13.816 evaluated at 2 degrees of freedom for
// goodness of fit; LRS length <= 24.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hqx/bytes.hpp"

namespace hqx::ranval {

inline constexpr std::size_t kRowBits = 256;
inline constexpr std::size_t kRowBytes = kRowBits / 8;

inline constexpr double kMcvPValueThreshold = 0.000005;
inline constexpr double kIndependenceChiSquareThreshold = 24.322;
inline constexpr int kIndependenceDof = 7;
inline constexpr double kGfChiSquareThreshold = 13.816;
inline constexpr int kGfDof = 2;
inline constexpr std::size_t kLrsLengthThreshold = 24;

struct RestartMatrix {
    std::size_t rows = 0;
    std::size_t cols = kRowBits;
    // Row-major, most-significant-bit-first within each byte.
    Bytes bits;

    std::span<const std::uint8_t> row(std::size_t r) const;
    bool bit(std::size_t r, std::size_t c) const;
};

// Invokes `source` once per row; each call must yield exactly cols/8 bytes.
// A throwing source is reported as a partial-collection error naming the row.
RestartMatrix collect_matrix(const std::function<Bytes(std::size_t)>& source, std::size_t rows);

// Binary file: rows x cols/8 bytes, row-major, MSB-first within a byte.
RestartMatrix load_matrix_binary(const std::string& path);
void save_matrix_binary(const RestartMatrix& matrix, const std::string& path);
// Hex text: one 64-hex-character row per line.
RestartMatrix load_matrix_hex(const std::string& path);
void save_matrix_hex(const RestartMatrix& matrix, const std::string& path);

struct McvResult {
    std::size_t row_index = 0;
    std::size_t mcv = 0;        // max(count of zeros, count of ones)
    double min_entropy = 0.0;   // -log2(mcv / 256)
    double p_value = 0.0;       // two-tailed exact Binomial(256, 1/2) tail
    bool pass = false;
};

struct ChiSquareResult {
    std::size_t row_index = 0;
    double statistic = 0.0;
    int dof = 0;
    double p_value = 0.0;
    bool pass = false;
};

struct LrsResult {
    std::size_t row_index = 0;
    std::size_t longest_run_length = 0;
    bool pass = false;
};

// All row tests require exactly 256 bits (32 bytes) and throw otherwise.
McvResult mcv_test(std::span<const std::uint8_t> row);
ChiSquareResult independence_test(std::span<const std::uint8_t> row);
ChiSquareResult gf_test(std::span<const std::uint8_t> row);
LrsResult lrs_test(std::span<const std::uint8_t> row);

// Exact two-tailed binomial tail P(max(X, 256-X) >= mcv) for X ~ Bin(256, 1/2),
// accumulated in the log domain. Exactly 1.0 for mcv <= 128.
double mcv_p_value(std::size_t mcv);

struct SummaryStats {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
};

SummaryStats five_number_summary(std::vector<double> values);

struct ValidationReport {
    std::size_t rows = 0;
    std::vector<McvResult> mcv;
    std::vector<ChiSquareResult> independence;
    std::vector<ChiSquareResult> gf;
    std::vector<LrsResult> lrs;
    SummaryStats mcv_p_summary, independence_p_summary, gf_p_summary;
    SummaryStats independence_stat_summary, gf_stat_summary, lrs_length_summary;
    bool overall_pass = false;
    std::vector<std::size_t> failing_rows;  // sorted, unique
};

ValidationReport run_suite(const RestartMatrix& matrix);

// Deterministic line-oriented rendering: one record per (row, test), then a
// summary block. Identical matrices produce byte-identical reports.
std::string report_to_text(const ValidationReport& report);
// Machine-readable variant.
std::string report_to_json(const ValidationReport& report);

}  // namespace hqx::ranval
