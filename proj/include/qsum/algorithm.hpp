#pragma once

// The n−r query sum-estimation algorithm.
//
// Core circuit on C^n ⊗ C^k (r | n, s = n/r, 2 ≤ s ≤ k), with
// Q = (X ⊗ I)·O_f applied right-to-left:
//
//   gather · Q^r · (relay · Q^r)^{s−2}
//
// started from (1/√s)(|r⟩|ω^1⟩ + Σ_{t=1..s−1} |0⟩|ω^{−t}⟩). The circuit
// makes r(s−1) = n−r oracle calls and leaves the position register at |0⟩
// with the value register in estimator_state(k, s, Σf): measuring it yields
// Σf mod k with probability s/k.
//
// Instances where the core circuit does not apply directly are planned as a
// partition of [0, n): when r ∤ n the remainder tail is read classically;
// when ⌊n/r⌋ > k the range splits into length-k blocks (step 1) each summed
// exactly, with the query surplus spent on idle probes; when ⌊n/r⌋ = 1 the
// unread prefix is guessed uniformly. Every plan charges exactly n−r oracle
// applications.

#include "qsum/operators.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace qsum {

struct AlgorithmParams {
    std::size_t n, k, r;
    std::size_t s;  // ⌊n/r⌋
    std::size_t w;  // n − r·s

    AlgorithmParams(std::size_t n, std::size_t k, std::size_t r);
};

// Core circuit over positions [offset, offset+length), length = step·blocks,
// 2 ≤ blocks ≤ k. Uses step·(blocks−1) queries.
struct CoreBlock {
    std::size_t offset, length, step, blocks;
};

// One oracle call to |position⟩|0⟩ followed by a value-register measurement.
struct ClassicalRead {
    std::size_t position;
};

// No queries: the segment's sum is guessed uniformly over Z_k.
struct GuessBlock {
    std::size_t offset, length;
};

using Segment = std::variant<CoreBlock, ClassicalRead, GuessBlock>;

struct ExecutionPlan {
    AlgorithmParams params;
    std::vector<Segment> segments;   // partition of [0, n) in position order
    std::size_t total_queries;       // always n − r
    std::size_t unused_queries;      // idle probes within the budget
};

struct RunReport {
    AlgorithmParams params;
    OutcomeDistribution distribution;  // exact law of the predicted sum
    double success_prob;               // distribution[Σf mod k]
    std::size_t approx_radius;         // ⌊k·r/2n⌋
    double approx_prob;                // mass within approx_radius of Σf
    std::size_t central_radius;        // ⌊k/2s⌋, the estimator peak half-width
    double central_prob;               // mass within central_radius of Σf
    std::size_t queries_used;          // oracle-matrix applications, = n − r
    std::size_t queries_unused;        // of those, idle probes (outcome ignored)
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> sampled_prediction;
};

// (1/√s)(|r⟩|ω^1⟩ + Σ_{t=1..s−1}|0⟩|ω^{−t}⟩); 2 ≤ s ≤ k, 1 ≤ r, r·s ≤ n.
JointState initial_state(std::size_t n, std::size_t k, std::size_t r, std::size_t s);

// The core circuit. Requires r | n and 2 ≤ n/r ≤ k.
JointState run_core(const FunctionTable& f, std::size_t r);

// Reads f(x) with one oracle call: apply O_f to |x⟩|0⟩, measure the value
// register. The outcome is deterministic.
std::size_t classical_read(const FunctionTable& f, std::size_t x);

ExecutionPlan plan(std::size_t n, std::size_t k, std::size_t r);

// Executes the plan and returns the exact distribution of the predicted sum
// (circular convolution of the per-segment laws). With a seed, one prediction
// is also sampled.
RunReport run_sum(const FunctionTable& f, std::size_t r,
                  std::optional<std::uint64_t> seed = std::nullopt);

// The two fully worked small instances, one state per circuit step.
// two_trits: n=2, k=3, r=1 (4 states). three_trits: n=3, k=3, r=1 (7 states).
enum class SmallCase { two_trits, three_trits };

std::vector<JointState> trace_small(const FunctionTable& f, SmallCase which);

}  // namespace qsum
