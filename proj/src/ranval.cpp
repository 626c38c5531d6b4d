#include "hqx/ranval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <boost/math/distributions/chi_squared.hpp>
#include <nlohmann/json.hpp>

#include "hqx/kernels.hpp"

namespace hqx::ranval {

namespace {

void check_row(std::span<const std::uint8_t> row) {
    if (row.size() != kRowBytes) throw Error("row must be exactly 256 bits");
}

double chi_square_sf(double statistic, int dof) {
    const boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, statistic));
}

// Longest repeated substring of a binary string via a suffix automaton: the
// answer is the longest state whose endpos set has at least two elements.
class SuffixAutomaton {
public:
    explicit SuffixAutomaton(std::size_t capacity) {
        states_.reserve(2 * capacity + 2);
        states_.push_back(State{0, -1, {-1, -1}, 0});
    }

    void extend(int symbol) {
        const int cur = static_cast<int>(states_.size());
        states_.push_back(State{states_[last_].len + 1, -1, {-1, -1}, 1});
        int p = last_;
        while (p != -1 && states_[p].next[symbol] == -1) {
            states_[p].next[symbol] = cur;
            p = states_[p].link;
        }
        if (p == -1) {
            states_[cur].link = 0;
        } else {
            const int q = states_[p].next[symbol];
            if (states_[p].len + 1 == states_[q].len) {
                states_[cur].link = q;
            } else {
                const int clone = static_cast<int>(states_.size());
                State cloned = states_[q];
                cloned.len = states_[p].len + 1;
                cloned.occurrences = 0;
                states_.push_back(cloned);
                while (p != -1 && states_[p].next[symbol] == q) {
                    states_[p].next[symbol] = clone;
                    p = states_[p].link;
                }
                states_[q].link = clone;
                states_[cur].link = clone;
            }
        }
        last_ = cur;
    }

    std::size_t longest_repeated() {
        // Propagate endpos sizes along suffix links, longest states first.
        std::vector<int> order(states_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(),
                  [&](int a, int b) { return states_[a].len > states_[b].len; });
        for (int v : order) {
            if (states_[v].link >= 0) states_[states_[v].link].occurrences += states_[v].occurrences;
        }
        std::size_t best = 0;
        for (const State& s : states_) {
            if (s.occurrences >= 2) best = std::max(best, static_cast<std::size_t>(s.len));
        }
        return best;
    }

private:
    struct State {
        int len;
        int link;
        std::array<int, 2> next;
        long occurrences;
    };
    std::vector<State> states_;
    int last_ = 0;
};

std::string format_double(const char* fmt, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, fmt, value);
    return buffer;
}

const char* pass_name(bool pass) {
    return pass ? "pass" : "fail";
}

}  // namespace

std::span<const std::uint8_t> RestartMatrix::row(std::size_t r) const {
    if (r >= rows) throw Error("row index out of range");
    const std::size_t row_bytes = cols / 8;
    return std::span(bits).subspan(r * row_bytes, row_bytes);
}

bool RestartMatrix::bit(std::size_t r, std::size_t c) const {
    if (c >= cols) throw Error("column index out of range");
    const auto row_span = row(r);
    return (row_span[c / 8] >> (7 - c % 8)) & 1u;
}

RestartMatrix collect_matrix(const std::function<Bytes(std::size_t)>& source, std::size_t rows) {
    RestartMatrix matrix;
    matrix.rows = rows;
    matrix.bits.reserve(rows * kRowBytes);
    for (std::size_t r = 0; r < rows; ++r) {
        Bytes row;
        try {
            row = source(r);
        } catch (const std::exception& e) {
            throw Error("collect_matrix: source failed at row " + std::to_string(r) + ": " +
                        e.what());
        }
        if (row.size() != kRowBytes) {
            throw Error("collect_matrix: source yielded " + std::to_string(row.size() * 8) +
                        " bits at row " + std::to_string(r));
        }
        matrix.bits.insert(matrix.bits.end(), row.begin(), row.end());
    }
    return matrix;
}

RestartMatrix load_matrix_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open matrix file '" + path + "'");
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (data.empty() || data.size() % kRowBytes != 0) {
        throw Error("matrix file '" + path + "' is not a whole number of 256-bit rows");
    }
    RestartMatrix matrix;
    matrix.rows = data.size() / kRowBytes;
    matrix.bits = std::move(data);
    return matrix;
}

void save_matrix_binary(const RestartMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open matrix file '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(matrix.bits.data()),
              static_cast<std::streamsize>(matrix.bits.size()));
    if (!out) throw Error("failed writing matrix file '" + path + "'");
}

RestartMatrix load_matrix_hex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open matrix file '" + path + "'");
    RestartMatrix matrix;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.size() != kRowBytes * 2) {
            throw Error("matrix hex row must be 64 characters, got " + std::to_string(line.size()));
        }
        const Bytes row = from_hex(line);
        matrix.bits.insert(matrix.bits.end(), row.begin(), row.end());
        ++matrix.rows;
    }
    if (matrix.rows == 0) throw Error("matrix file '" + path + "' has no rows");
    return matrix;
}

void save_matrix_hex(const RestartMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open matrix file '" + path + "' for writing");
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        out << to_hex(matrix.row(r)) << '\n';
    }
    if (!out) throw Error("failed writing matrix file '" + path + "'");
}

double mcv_p_value(std::size_t mcv) {
    constexpr std::size_t n = kRowBits;
    if (mcv > n) throw Error("mcv cannot exceed the row length");
    if (mcv <= n / 2) return 1.0;
    // log pmf(k) for Bin(n, 1/2), summed over k = mcv..n with log-sum-exp.
    const double log_half_n = static_cast<double>(n) * std::log(2.0);
    double log_sum = -std::numeric_limits<double>::infinity();
    for (std::size_t k = mcv; k <= n; ++k) {
        const double log_pmf = std::lgamma(static_cast<double>(n) + 1.0) -
                               std::lgamma(static_cast<double>(k) + 1.0) -
                               std::lgamma(static_cast<double>(n - k) + 1.0) - log_half_n;
        if (log_pmf > log_sum) {
            log_sum = log_pmf + std::log1p(std::exp(log_sum - log_pmf));
        } else {
            log_sum = log_sum + std::log1p(std::exp(log_pmf - log_sum));
        }
    }
    return std::min(1.0, 2.0 * std::exp(log_sum));
}

McvResult mcv_test(std::span<const std::uint8_t> row) {
    check_row(row);
    const std::size_t ones = kernels::popcount(row);
    const std::size_t mcv = std::max(ones, kRowBits - ones);
    McvResult result;
    result.mcv = mcv;
    result.min_entropy = -std::log2(static_cast<double>(mcv) / static_cast<double>(kRowBits));
    result.p_value = mcv_p_value(mcv);
    result.pass = result.p_value >= kMcvPValueThreshold;
    return result;
}

ChiSquareResult independence_test(std::span<const std::uint8_t> row) {
    check_row(row);
    // 8 blocks of 32 bits; expected 16 zeros and 16 ones per block.
    constexpr double kExpected = 16.0;
    double statistic = 0.0;
    for (std::size_t block = 0; block < 8; ++block) {
        const auto block_span = row.subspan(block * 4, 4);
        const double ones = static_cast<double>(kernels::popcount(block_span));
        const double zeros = 32.0 - ones;
        statistic += (ones - kExpected) * (ones - kExpected) / kExpected;
        statistic += (zeros - kExpected) * (zeros - kExpected) / kExpected;
    }
    ChiSquareResult result;
    result.statistic = statistic;
    result.dof = kIndependenceDof;
    result.p_value = chi_square_sf(statistic, kIndependenceDof);
    result.pass = statistic <= kIndependenceChiSquareThreshold;
    return result;
}

ChiSquareResult gf_test(std::span<const std::uint8_t> row) {
    check_row(row);
    // 128 non-overlapping 2-bit cells; expected 32 per category.
    constexpr double kExpected = 32.0;
    std::uint32_t counts[4] = {0, 0, 0, 0};
    kernels::pair_histogram(row, counts);
    double statistic = 0.0;
    for (std::uint32_t count : counts) {
        const double diff = static_cast<double>(count) - kExpected;
        statistic += diff * diff / kExpected;
    }
    ChiSquareResult result;
    result.statistic = statistic;
    result.dof = kGfDof;
    result.p_value = chi_square_sf(statistic, kGfDof);
    result.pass = statistic <= kGfChiSquareThreshold;
    return result;
}

LrsResult lrs_test(std::span<const std::uint8_t> row) {
    check_row(row);
    SuffixAutomaton automaton(kRowBits);
    for (std::size_t i = 0; i < kRowBits; ++i) {
        const int bit = (row[i / 8] >> (7 - i % 8)) & 1;
        automaton.extend(bit);
    }
    LrsResult result;
    result.longest_run_length = automaton.longest_repeated();
    result.pass = result.longest_run_length <= kLrsLengthThreshold;
    return result;
}

SummaryStats five_number_summary(std::vector<double> values) {
    if (values.empty()) throw Error("five_number_summary: no values");
    std::sort(values.begin(), values.end());
    const auto quantile = [&](double q) {
        const double h = q * static_cast<double>(values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(h));
        const std::size_t hi = static_cast<std::size_t>(std::ceil(h));
        const double frac = h - static_cast<double>(lo);
        return values[lo] + (values[hi] - values[lo]) * frac;
    };
    SummaryStats stats;
    stats.min = values.front();
    stats.q1 = quantile(0.25);
    stats.median = quantile(0.5);
    stats.q3 = quantile(0.75);
    stats.max = values.back();
    return stats;
}

ValidationReport run_suite(const RestartMatrix& matrix) {
    if (matrix.cols != kRowBits) throw Error("run_suite: matrix must have 256-bit rows");
    ValidationReport report;
    report.rows = matrix.rows;
    report.mcv.reserve(matrix.rows);
    report.independence.reserve(matrix.rows);
    report.gf.reserve(matrix.rows);
    report.lrs.reserve(matrix.rows);

    std::vector<double> mcv_p, ind_p, gf_p, ind_stat, gf_stat, lrs_len;
    report.overall_pass = true;
    for (std::size_t r = 0; r < matrix.rows; ++r) {
        const auto row = matrix.row(r);
        McvResult mcv = mcv_test(row);
        ChiSquareResult ind = independence_test(row);
        ChiSquareResult gf = gf_test(row);
        LrsResult lrs = lrs_test(row);
        mcv.row_index = ind.row_index = gf.row_index = lrs.row_index = r;

        const bool row_pass = mcv.pass && ind.pass && gf.pass && lrs.pass;
        if (!row_pass) {
            report.overall_pass = false;
            report.failing_rows.push_back(r);
        }
        mcv_p.push_back(mcv.p_value);
        ind_p.push_back(ind.p_value);
        gf_p.push_back(gf.p_value);
        ind_stat.push_back(ind.statistic);
        gf_stat.push_back(gf.statistic);
        lrs_len.push_back(static_cast<double>(lrs.longest_run_length));

        report.mcv.push_back(mcv);
        report.independence.push_back(ind);
        report.gf.push_back(gf);
        report.lrs.push_back(lrs);
    }
    report.mcv_p_summary = five_number_summary(mcv_p);
    report.independence_p_summary = five_number_summary(ind_p);
    report.gf_p_summary = five_number_summary(gf_p);
    report.independence_stat_summary = five_number_summary(ind_stat);
    report.gf_stat_summary = five_number_summary(gf_stat);
    report.lrs_length_summary = five_number_summary(lrs_len);
    return report;
}

namespace {

std::string summary_line(const char* name, const SummaryStats& stats, const char* fmt) {
    std::string out = "summary,";
    out += name;
    for (double v : {stats.min, stats.q1, stats.median, stats.q3, stats.max}) {
        out += ',';
        out += format_double(fmt, v);
    }
    out += '\n';
    return out;
}

}  // namespace

std::string report_to_text(const ValidationReport& report) {
    std::string out;
    out.reserve(report.rows * 160);
    for (std::size_t r = 0; r < report.rows; ++r) {
        const auto& mcv = report.mcv[r];
        out += std::to_string(r) + ",mcv," + std::to_string(mcv.mcv) + ',' +
               format_double("%.6f", mcv.min_entropy) + ',' + format_double("%.6e", mcv.p_value) +
               ',' + pass_name(mcv.pass) + '\n';
        const auto& ind = report.independence[r];
        out += std::to_string(r) + ",independence," + format_double("%.6f", ind.statistic) + ',' +
               format_double("%.6e", ind.p_value) + ',' + pass_name(ind.pass) + '\n';
        const auto& gf = report.gf[r];
        out += std::to_string(r) + ",gf," + format_double("%.6f", gf.statistic) + ',' +
               format_double("%.6e", gf.p_value) + ',' + pass_name(gf.pass) + '\n';
        const auto& lrs = report.lrs[r];
        out += std::to_string(r) + ",lrs," + std::to_string(lrs.longest_run_length) + ',' +
               pass_name(lrs.pass) + '\n';
    }
    out += summary_line("mcv_p", report.mcv_p_summary, "%.6e");
    out += summary_line("independence_p", report.independence_p_summary, "%.6e");
    out += summary_line("gf_p", report.gf_p_summary, "%.6e");
    out += summary_line("independence_stat", report.independence_stat_summary, "%.6f");
    out += summary_line("gf_stat", report.gf_stat_summary, "%.6f");
    out += summary_line("lrs_length", report.lrs_length_summary, "%.2f");
    out += "failing_rows,";
    if (report.failing_rows.empty()) {
        out += '-';
    } else {
        for (std::size_t i = 0; i < report.failing_rows.size(); ++i) {
            if (i > 0) out += ' ';
            out += std::to_string(report.failing_rows[i]);
        }
    }
    out += '\n';
    out += std::string("overall,") + pass_name(report.overall_pass) + '\n';
    return out;
}

std::string report_to_json(const ValidationReport& report) {
    nlohmann::json doc;
    doc["rows"] = report.rows;
    doc["overall_pass"] = report.overall_pass;
    doc["failing_rows"] = report.failing_rows;

    auto summary = [](const SummaryStats& s) {
        return nlohmann::json{{"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3},
                              {"max", s.max}};
    };
    doc["summary"]["mcv_p"] = summary(report.mcv_p_summary);
    doc["summary"]["independence_p"] = summary(report.independence_p_summary);
    doc["summary"]["gf_p"] = summary(report.gf_p_summary);
    doc["summary"]["independence_stat"] = summary(report.independence_stat_summary);
    doc["summary"]["gf_stat"] = summary(report.gf_stat_summary);
    doc["summary"]["lrs_length"] = summary(report.lrs_length_summary);

    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < report.rows; ++r) {
        nlohmann::json row;
        row["row"] = r;
        row["mcv"] = {{"mcv", report.mcv[r].mcv},
                      {"min_entropy", report.mcv[r].min_entropy},
                      {"p_value", report.mcv[r].p_value},
                      {"pass", report.mcv[r].pass}};
        row["independence"] = {{"statistic", report.independence[r].statistic},
                               {"dof", report.independence[r].dof},
                               {"p_value", report.independence[r].p_value},
                               {"pass", report.independence[r].pass}};
        row["gf"] = {{"statistic", report.gf[r].statistic},
                     {"dof", report.gf[r].dof},
                     {"p_value", report.gf[r].p_value},
                     {"pass", report.gf[r].pass}};
        row["lrs"] = {{"length", report.lrs[r].longest_run_length}, {"pass", report.lrs[r].pass}};
        rows.push_back(std::move(row));
    }
    doc["results"] = std::move(rows);
    return doc.dump(2);
}

}  // namespace hqx::ranval
