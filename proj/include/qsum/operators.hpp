#pragma once

// Dense unitaries on the joint space C^n ⊗ C^k and the builders the summation
// circuit is made of:
//
//   shift_op(d)         X|z⟩ = |z+1 mod d⟩
//   fourier_op(k)       F|y⟩ = (1/√k) Σ_ℓ ω^{ℓy}|ℓ⟩ = |ω^{-y}⟩
//   oracle_op(f)        O_f|x⟩|y⟩ = |x⟩|y + f(x) mod k⟩
//   gather_op(n,k,step) swaps |n−step⟩|ω^{k−1}⟩ ↔ |0⟩|ω^0⟩, identity elsewhere
//   relay_op(n,k,step)  fixes |x⟩|ω^0⟩; maps |x⟩|ω^{k−1}⟩ ↦ |x+step⟩|ω^1⟩;
//                       otherwise |x⟩|ω^y⟩ ↦ |x⟩|ω^{y+1}⟩
//
// gather_op and relay_op act as permutations of the mixed basis
// {|x⟩ ⊗ |ω^y⟩}; they are realized by conjugating a computational-basis
// permutation with the value-register basis change W|a⟩ = |ω^a⟩. Dense
// matrices keep unitarity directly assertable via unitarity_gap().

#include "qsum/state.hpp"

#include <cstddef>
#include <vector>

namespace qsum {

class UnitaryOp {
public:
    // Row-major dim×dim entries; validated finite.
    UnitaryOp(std::size_t dim, std::vector<cx> entries);

    static UnitaryOp identity(std::size_t dim);

    std::size_t dim() const { return dim_; }
    const cx& at(std::size_t row, std::size_t col) const;
    const std::vector<cx>& entries() const { return entries_; }

    std::vector<cx> apply(const std::vector<cx>& v) const;
    StateVector apply(const StateVector& s) const;
    JointState apply(const JointState& s) const;

    UnitaryOp operator*(const UnitaryOp& rhs) const;  // matrix product
    UnitaryOp adjoint() const;

    // ‖U†U − I‖∞ (largest entry magnitude of the defect).
    double unitarity_gap() const;

    bool operator==(const UnitaryOp&) const = default;

private:
    std::size_t dim_;
    std::vector<cx> entries_;
};

// A ⊗ B on C^{dim(A)·dim(B)}.
UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b);

// f: Z_n → Z_k as an explicit table. n ≥ 1, k ≥ 2, every value in [0, k).
class FunctionTable {
public:
    FunctionTable(std::size_t k, std::vector<unsigned> values);

    std::size_t n() const { return values_.size(); }
    std::size_t k() const { return k_; }
    unsigned operator()(std::size_t x) const;
    const std::vector<unsigned>& values() const { return values_; }

    // Σ_x f(x) mod k
    unsigned sum() const;

    // The restriction f(offset), …, f(offset+length−1) as a table on Z_length.
    FunctionTable slice(std::size_t offset, std::size_t length) const;

    bool operator==(const FunctionTable&) const = default;

private:
    std::size_t k_;
    std::vector<unsigned> values_;
};

UnitaryOp shift_op(std::size_t d);
UnitaryOp fourier_op(std::size_t k);
UnitaryOp oracle_op(const FunctionTable& f);

// step is reduced mod n; step = 1 swaps at |n−1⟩.
UnitaryOp gather_op(std::size_t n, std::size_t k, std::size_t step = 1);
UnitaryOp relay_op(std::size_t n, std::size_t k, std::size_t step);

}  // namespace qsum
