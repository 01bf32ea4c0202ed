#pragma once

// Two-register qudit states for the modular-sum estimation circuit.
//
// Conventions used throughout the library:
//   ω = exp(2πi/k), the primitive k-th root of unity
//   fourier_state(k, a) = |ω^a⟩ = (1/√k) Σ_ℓ ω^{-aℓ}|ℓ⟩, the shift
//     eigenvector with eigenvalue ω^a
//   a joint basis vector |x⟩|y⟩ of C^n ⊗ C^k sits at amplitude index x·k + y
//
// All types are immutable values after construction. Constructors validate
// their inputs (finiteness, unit norm, index ranges) and throw
// std::invalid_argument / std::out_of_range on contract violations.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace qsum {

using cx = std::complex<double>;

// ω_k^e. The exponent is reduced mod k before any trig call, so large
// exponents lose no accuracy; quarter-turn multiples come out exact.
cx root_of_unity(std::size_t k, long long exponent);

// Distance on the residue ring Z_k: min(|a−b|, k−|a−b|). a, b in [0, k).
std::size_t ring_distance(std::size_t a, std::size_t b, std::size_t k);

class StateVector {
public:
    // amps must be nonempty, finite, and have unit norm (guard 1e-9).
    explicit StateVector(std::vector<cx> amps);

    static StateVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return amps_.size(); }
    const cx& operator[](std::size_t i) const { return amps_[i]; }
    const std::vector<cx>& amps() const { return amps_; }

private:
    std::vector<cx> amps_;
};

// State of C^n ⊗ C^k: position register (dimension n) times value register
// (dimension k ≥ 2).
class JointState {
public:
    JointState(std::size_t n, std::size_t k, std::vector<cx> amps);

    // |x⟩|y⟩
    static JointState basis(std::size_t n, std::size_t k, std::size_t x,
                            std::size_t y);

    std::size_t n() const { return n_; }
    std::size_t k() const { return k_; }
    std::size_t dim() const { return amps_.size(); }
    const cx& at(std::size_t x, std::size_t y) const;
    const std::vector<cx>& amps() const { return amps_; }

    // Σ_y |⟨x,y|ψ⟩|², the probability of seeing the position register at x.
    double position_prob(std::size_t x) const;

    // The k amplitudes ⟨x,·|ψ⟩, unnormalized.
    std::vector<cx> value_slice(std::size_t x) const;

private:
    std::size_t n_, k_;
    std::vector<cx> amps_;
};

// Probabilities over Z_k outcomes. Entries must be in [0,1] and sum to 1
// (guard 1e-9; the test grids pin 1e-12 on all produced distributions).
class OutcomeDistribution {
public:
    explicit OutcomeDistribution(std::vector<double> probs);

    std::size_t k() const { return probs_.size(); }
    double operator[](std::size_t y) const;
    const std::vector<double>& probs() const { return probs_; }

    // Total mass at ring distance ≤ radius from center.
    double mass_within(std::size_t center, std::size_t radius) const;

    // One outcome drawn by inverse CDF. Uses only the engine's raw 64-bit
    // output (53-bit mantissa uniform), so results are reproducible across
    // standard library implementations.
    std::size_t sample(std::mt19937_64& rng) const;

private:
    std::vector<double> probs_;
};

// |ω^a⟩ for 0 ≤ a < k.
StateVector fourier_state(std::size_t k, std::size_t a);

// Marginal distribution of the value register: probs[y] = Σ_x |⟨x,y|ψ⟩|².
OutcomeDistribution measure_second_register(const JointState& state);

// True iff u = φ·v for some unit phase φ, entrywise within tol. The phase is
// taken from the global inner product ⟨v|u⟩, which is robust where single
// entries vanish. Dimension mismatch throws.
bool phase_equal(const std::vector<cx>& u, const std::vector<cx>& v, double tol);
bool phase_equal(const StateVector& u, const StateVector& v, double tol);
bool phase_equal(const JointState& u, const JointState& v, double tol);

}  // namespace qsum
