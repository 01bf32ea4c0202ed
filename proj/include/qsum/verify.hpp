#pragma once

// Exhaustive verification harness: enumerates every table f: Z_n → Z_k on a
// small grid, runs the full simulator, and compares against each closed-form
// claim (operator algebra, estimator law, phase-split identity, success
// formula, query accounting, trade-off curves). Failures are reported, never
// thrown; the report serializes to JSON deterministically.

#include "qsum/algorithm.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace qsum {

struct GridSpec {
    std::size_t max_n = 4;
    std::size_t max_k = 4;
    // bound for floating probability comparisons; algebraic identities use
    // min(tolerance, 1e-12)
    double tolerance = 1e-9;
    // largest k^n a single grid cell may enumerate
    std::size_t oracle_cap = 1000000;
};

struct CheckResult {
    std::string name;
    std::string instance;
    std::string expected;
    std::string observed;
    bool pass;
};

struct VerificationReport {
    GridSpec grid;
    std::vector<CheckResult> checks;
    std::size_t passed = 0;
    std::size_t failed = 0;

    bool all_pass() const { return failed == 0; }
};

// All k^n tables in lexicographic order, f(0) most significant.
// Throws when k^n exceeds cap.
std::vector<FunctionTable> enumerate_oracles(std::size_t n, std::size_t k,
                                             std::size_t cap = 1000000);

struct SuccessSummary {
    double min;
    double max;
    double mean;
};

// run_sum success probability extremes over every oracle.
SuccessSummary exhaustive_success(std::size_t n, std::size_t k, std::size_t r,
                                  std::size_t cap = 1000000);

// The fully worked small-case states assembled directly from their displayed
// form (explicit phases on mixed-basis components), independent of the
// circuit path taken by trace_small.
std::vector<JointState> reference_trace(const FunctionTable& f, SmallCase which);

VerificationReport check_suite(const GridSpec& grid);

std::string report_json(const VerificationReport& report);

}  // namespace qsum
