#pragma once

// Closed-form companions to the simulator: the estimator state measured at
// the end of the core circuit, its measurement law, the success-probability
// formula, and the query-count trade-off curves it is compared against.
//
// Probability formulas are computed in exact rational arithmetic
// (boost::multiprecision) and converted to double only at output boundaries.

#include "qsum/operators.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace qsum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Canonical "p/q" (or "p" when q = 1).
std::string fraction_string(const Rational& r);
double to_double(const Rational& r);

// The s-component superposition (1/√s) Σ_{ℓ=1..s} ω^{-ℓa}|ω^{s-ℓ}⟩ on C^k.
// Measuring it in the computational basis peaks at a. 1 ≤ s ≤ k, 0 ≤ a < k.
StateVector estimator_state(std::size_t k, std::size_t s, std::size_t a);

// |⟨y|estimator_state(k,s,a)⟩|² in closed form:
//   (1/sk)·(sin(πs(y−a)/k) / sin(π(y−a)/k))², continued to s/k at y = a.
double estimator_prob(std::size_t k, std::size_t s, std::size_t a, std::size_t y);

// Mass of the estimator law within ring distance ⌊k/2s⌋ of the peak.
// Always ≥ 4/π².
double central_mass(std::size_t k, std::size_t s);

// The phase-factoring identity behind the core circuit: with block sums
// B_m = f((m−1)r) + … + f(mr−1), m = 1..s = n/r,
//   ω^{Σ m·B_m} (1/√s) Σ_ℓ ω^{-ℓ·Σf}|ω^{s-ℓ}⟩
//     = (1/√s) Σ_ℓ ω^{Σ_m (m-ℓ)B_m}|ω^{s-ℓ}⟩.
// Builds both sides and returns ‖lhs − rhs‖∞. Requires r | n and n/r ≤ k.
double block_phase_gap(const FunctionTable& f, std::size_t r);

// Success probability of the n−r query sum estimation: min{⌊n/r⌋/k, 1}.
Rational success_probability(std::size_t n, std::size_t k, std::size_t r);

// Probability that q nonadaptive interrogation queries identify all of a
// uniformly random table f: Z_n → Z_k:  p_q = k^{-n} Σ_{j≤q} C(n,j)(k−1)^j.
Rational vandam_identify_prob(std::size_t n, std::size_t k, std::size_t q);

// Sum-success upper bound via identification: p_q + (1 − p_q)/k.
Rational vandam_sum_bound(std::size_t n, std::size_t k, std::size_t q);

struct CurvePoint {
    std::size_t q;
    Rational p;
};

struct Curve {
    std::size_t n, k;
    std::vector<CurvePoint> points;  // q = 0..n, strictly increasing
};

// Success-vs-queries data: `success` is the step curve of the sum algorithm
// (q = n−r queries; defined as 1 at q = n), `bound` is the identification
// bound at the same q.
struct SweepCurves {
    Curve success;
    Curve bound;
};

SweepCurves sweep_curves(std::size_t n, std::size_t k);

}  // namespace qsum
