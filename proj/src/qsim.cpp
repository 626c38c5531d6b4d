#include "hqx/qsim.hpp"

#include <cmath>
#include <numbers>

namespace hqx::qsim {

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

bool is_finite(const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

void check_dim(std::size_t dim, const char* what) {
    if (dim != 2 && dim != 4) throw Error(std::string(what) + ": dimension must be 2 or 4");
}

}  // namespace

StateVector StateVector::computational(std::size_t dim, std::size_t basis_index) {
    check_dim(dim, "StateVector");
    if (basis_index >= dim) throw Error("StateVector: basis index out of range");
    std::vector<Complex> amps(dim, Complex{0.0, 0.0});
    amps[basis_index] = Complex{1.0, 0.0};
    return StateVector(std::move(amps));
}

StateVector::StateVector(std::vector<Complex> amplitudes) : amplitudes_(std::move(amplitudes)) {
    check_dim(amplitudes_.size(), "StateVector");
    double norm2 = 0.0;
    for (const Complex& a : amplitudes_) {
        if (!is_finite(a)) throw Error("StateVector: non-finite amplitude");
        norm2 += std::norm(a);
    }
    if (std::abs(norm2 - 1.0) > kNormTolerance) {
        throw Error("StateVector: state is not normalized");
    }
}

double StateVector::squared_norm() const {
    double norm2 = 0.0;
    for (const Complex& a : amplitudes_) norm2 += std::norm(a);
    return norm2;
}

GateMatrix::GateMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
    check_dim(dim_, "GateMatrix");
    if (entries_.size() != dim_ * dim_) throw Error("GateMatrix: wrong entry count");
    for (const Complex& e : entries_) {
        if (!is_finite(e)) throw Error("GateMatrix: non-finite entry");
    }
    // G * G^dagger must be the identity.
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            Complex sum{0.0, 0.0};
            for (std::size_t k = 0; k < dim_; ++k) {
                sum += entries_[r * dim_ + k] * std::conj(entries_[c * dim_ + k]);
            }
            const Complex expected = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
            if (std::abs(sum - expected) > kAlgebraTolerance) {
                throw Error("GateMatrix: matrix is not unitary");
            }
        }
    }
}

const Complex& GateMatrix::at(std::size_t row, std::size_t col) const {
    if (row >= dim_ || col >= dim_) throw Error("GateMatrix: index out of range");
    return entries_[row * dim_ + col];
}

GateMatrix GateMatrix::operator*(const GateMatrix& rhs) const {
    if (dim_ != rhs.dim_) throw Error("GateMatrix: dimension mismatch in product");
    std::vector<Complex> out(dim_ * dim_, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < dim_; ++r) {
        for (std::size_t c = 0; c < dim_; ++c) {
            Complex sum{0.0, 0.0};
            for (std::size_t k = 0; k < dim_; ++k) {
                sum += entries_[r * dim_ + k] * rhs.entries_[k * dim_ + c];
            }
            out[r * dim_ + c] = sum;
        }
    }
    return GateMatrix(dim_, std::move(out));
}

GateMatrix gate_identity() {
    return GateMatrix(2, {Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{1, 0}});
}

GateMatrix gate_h() {
    return GateMatrix(2, {Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0},
                          Complex{-kInvSqrt2, 0}});
}

GateMatrix gate_s() {
    return GateMatrix(2, {Complex{1, 0}, Complex{0, 0}, Complex{0, 0}, Complex{0, 1}});
}

GateMatrix gate_x() {
    return GateMatrix(2, {Complex{0, 0}, Complex{1, 0}, Complex{1, 0}, Complex{0, 0}});
}

GateMatrix gate_hs() {
    return GateMatrix(2, {Complex{kInvSqrt2, 0}, Complex{0, kInvSqrt2}, Complex{kInvSqrt2, 0},
                          Complex{0, -kInvSqrt2}});
}

GateMatrix tensor(const GateMatrix& a, const GateMatrix& b) {
    if (a.dim() != 2 || b.dim() != 2) throw Error("tensor: both factors must be 2x2");
    std::vector<Complex> out(16, Complex{0.0, 0.0});
    for (std::size_t ar = 0; ar < 2; ++ar) {
        for (std::size_t ac = 0; ac < 2; ++ac) {
            for (std::size_t br = 0; br < 2; ++br) {
                for (std::size_t bc = 0; bc < 2; ++bc) {
                    out[(ar * 2 + br) * 4 + (ac * 2 + bc)] = a.at(ar, ac) * b.at(br, bc);
                }
            }
        }
    }
    return GateMatrix(4, std::move(out));
}

StateVector make_bell_pair() {
    return StateVector({Complex{kInvSqrt2, 0}, Complex{0, 0}, Complex{0, 0}, Complex{kInvSqrt2, 0}});
}

StateVector apply(const GateMatrix& gate, const StateVector& state) {
    if (gate.dim() != state.dim()) throw Error("apply: gate/state dimension mismatch");
    const std::size_t dim = state.dim();
    std::vector<Complex> out(dim, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < dim; ++r) {
        Complex sum{0.0, 0.0};
        for (std::size_t c = 0; c < dim; ++c) sum += gate.at(r, c) * state.amplitude(c);
        out[r] = sum;
    }
    return StateVector(std::move(out));
}

MeasurementOutcome measure(const StateVector& state, RandomSource& rng) {
    if (std::abs(state.squared_norm() - 1.0) > kNormTolerance) {
        throw Error("measure: state is not normalized");
    }
    const std::size_t dim = state.dim();
    const double u = rng.next_unit();
    double cumulative = 0.0;
    std::size_t outcome = dim - 1;
    for (std::size_t i = 0; i < dim; ++i) {
        cumulative += std::norm(state.amplitude(i));
        if (u < cumulative) {
            outcome = i;
            break;
        }
    }
    std::string bits;
    if (dim == 2) {
        bits = (outcome == 0) ? "0" : "1";
    } else {
        bits.push_back(((outcome >> 1) & 1) ? '1' : '0');
        bits.push_back((outcome & 1) ? '1' : '0');
    }
    return MeasurementOutcome{std::move(bits), StateVector::computational(dim, outcome)};
}

QubitMeasurement measure_qubit(const StateVector& state, int qubit, RandomSource& rng) {
    if (state.dim() != 4) throw Error("measure_qubit: state must have two qubits");
    if (qubit != 0 && qubit != 1) throw Error("measure_qubit: qubit must be 0 or 1");
    if (std::abs(state.squared_norm() - 1.0) > kNormTolerance) {
        throw Error("measure_qubit: state is not normalized");
    }
    const std::size_t mask = (qubit == 0) ? 1u : 2u;
    double p0 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        if ((i & mask) == 0) p0 += std::norm(state.amplitude(i));
    }
    const double u = rng.next_unit();
    const int bit = (u < p0) ? 0 : 1;
    const double p = (bit == 0) ? p0 : 1.0 - p0;
    const double scale = 1.0 / std::sqrt(p);
    std::vector<Complex> remaining(2, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < 4; ++i) {
        const int this_bit = (i & mask) ? 1 : 0;
        if (this_bit != bit) continue;
        const std::size_t other = (qubit == 0) ? (i >> 1) : (i & 1);
        remaining[other] = state.amplitude(i) * scale;
    }
    return QubitMeasurement{bit, StateVector(std::move(remaining))};
}

}  // namespace hqx::qsim
