// Exact complex statevector simulation for one or two qubits: the standard
// gates, Kronecker products, Bell-pair creation, and Born-rule measurement.
//
// Basis convention (used everywhere): for two qubits the basis is
// |q_i q_j> = |00>, |01>, |10>, |11> with q_i as the high-order bit. In
// tensor(a, b), `a` acts on q_i and `b` acts on q_j.
//
// Gates are values and apply() returns a new StateVector; nothing is
// mutated in place. All functions are pure and safe for concurrent use
// except measurement, whose RandomSource must not be shared.

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "hqx/errors.hpp"
#include "hqx/rng.hpp"

namespace hqx::qsim {

using Complex = std::complex<double>;

// Algebraic identities (unitarity, golden amplitudes) hold to this tolerance.
inline constexpr double kAlgebraTolerance = 1e-12;
// Normalization guard used when validating externally supplied states.
inline constexpr double kNormTolerance = 1e-9;

class StateVector {
public:
    // Computational basis state |basis_index> of the given dimension.
    static StateVector computational(std::size_t dim, std::size_t basis_index);

    // Validates dim in {2, 4}, finite components, and unit norm (1e-9 guard).
    explicit StateVector(std::vector<Complex> amplitudes);

    std::size_t dim() const { return amplitudes_.size(); }
    const Complex& amplitude(std::size_t i) const { return amplitudes_.at(i); }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }

    // Sum of |amplitude|^2.
    double squared_norm() const;

private:
    std::vector<Complex> amplitudes_;
};

class GateMatrix {
public:
    // Row-major entries; validates dim in {2, 4} and unitarity within 1e-12.
    GateMatrix(std::size_t dim, std::vector<Complex> entries);

    std::size_t dim() const { return dim_; }
    const Complex& at(std::size_t row, std::size_t col) const;

    // Matrix product this * rhs (rhs applied first).
    GateMatrix operator*(const GateMatrix& rhs) const;

private:
    std::size_t dim_;
    std::vector<Complex> entries_;
};

// The standard single-qubit gates.
GateMatrix gate_identity();
GateMatrix gate_h();
GateMatrix gate_s();  // diag(1, i)
GateMatrix gate_x();
// H*S as a single matrix: (1/sqrt 2) [[1, i], [1, -i]].
GateMatrix gate_hs();

// Kronecker product; `a` acts on q_i (high-order), `b` on q_j (low-order).
GateMatrix tensor(const GateMatrix& a, const GateMatrix& b);

// (1/sqrt 2)(|00> + |11>): H on q_j then CNOT controlled by q_j.
StateVector make_bell_pair();

// Matrix-vector product. No renormalization; unitarity preserves the norm.
StateVector apply(const GateMatrix& gate, const StateVector& state);

struct MeasurementOutcome {
    // "0"/"1" for dim 2; "00".."11" for dim 4, q_i first.
    std::string bits;
    StateVector collapsed;
};

// Born-rule sample over |amplitude|^2 via inverse CDF; deterministic given a
// seeded RandomSource. Throws if the state norm deviates by more than 1e-9.
MeasurementOutcome measure(const StateVector& state, RandomSource& rng);

struct QubitMeasurement {
    int bit;                // 0 or 1
    StateVector remaining;  // the unmeasured qubit's collapsed (dim 2) state
};

// Measures one qubit of a two-qubit state. qubit 0 is q_j (low-order),
// qubit 1 is q_i (high-order). The remaining qubit's state is renormalized.
QubitMeasurement measure_qubit(const StateVector& state, int qubit, RandomSource& rng);

}  // namespace hqx::qsim
