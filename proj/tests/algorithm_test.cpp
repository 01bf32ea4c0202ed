#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsum/algorithm.hpp"
#include "qsum/analysis.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

using namespace qsum;

namespace {

constexpr double tight = 1e-12;

// adds coeff · |x⟩|ω^a⟩ into a joint amplitude vector
void add_component(std::vector<cx>& amps, std::size_t k, cx coeff, std::size_t x,
                   std::size_t a) {
    const StateVector comp = fourier_state(k, a % k);
    for (std::size_t m = 0; m < k; ++m) amps[x * k + m] += coeff * comp[m];
}

double max_diff(const JointState& got, const std::vector<cx>& want) {
    double d = 0;
    for (std::size_t i = 0; i < want.size(); ++i)
        d = std::max(d, std::abs(got.amps()[i] - want[i]));
    return d;
}

// |0⟩ ⊗ estimator_state(k, s, a) on C^n ⊗ C^k
JointState collapsed_reference(std::size_t n, std::size_t k, std::size_t s,
                               std::size_t a) {
    const StateVector est = estimator_state(k, s, a);
    std::vector<cx> amps(n * k, cx{0, 0});
    for (std::size_t m = 0; m < k; ++m) amps[m] = est[m];
    return JointState(n, k, std::move(amps));
}

FunctionTable synth(std::size_t n, std::size_t k, std::size_t salt) {
    std::vector<unsigned> vals(n);
    for (std::size_t x = 0; x < n; ++x)
        vals[x] = static_cast<unsigned>((x * 13 + 7 * salt + salt * salt) % k);
    return FunctionTable(k, std::move(vals));
}

}  // namespace

TEST_CASE("initial_state: frozen amplitudes for n=2, k=3") {
    // (1/√2)(|1⟩|ω^1⟩ + |0⟩|ω^{-1}⟩)
    const JointState init = initial_state(2, 3, 1, 2);
    std::vector<cx> want(6, cx{0, 0});
    const double c = 1 / std::sqrt(2.0);
    add_component(want, 3, cx{c, 0}, 1, 1);
    add_component(want, 3, cx{c, 0}, 0, 2);
    CHECK(max_diff(init, want) < tight);
    CHECK(init.position_prob(0) == doctest::Approx(0.5).epsilon(tight));
    CHECK(init.position_prob(1) == doctest::Approx(0.5).epsilon(tight));
}

TEST_CASE("initial_state: position marginals and validation") {
    for (std::size_t k = 2; k <= 5; ++k)
        for (std::size_t s = 2; s <= k; ++s)
            for (std::size_t r = 1; r * s <= 3 * s; ++r) {
                const std::size_t n = r * s + (r % 2);  // also covers r·s < n
                const JointState init = initial_state(n, k, r, s);
                CHECK(init.position_prob(r) ==
                      doctest::Approx(1.0 / double(s)).epsilon(tight));
                CHECK(init.position_prob(0) ==
                      doctest::Approx(double(s - 1) / double(s)).epsilon(tight));
                for (std::size_t x = 1; x < n; ++x)
                    if (x != r) CHECK(init.position_prob(x) < tight);
            }
    CHECK_THROWS_AS(initial_state(4, 3, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(initial_state(4, 3, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(initial_state(4, 3, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(initial_state(3, 3, 2, 2), std::invalid_argument);
}

TEST_CASE("two-trit trace: every step matches the hand-worked states") {
    for (unsigned f0 = 0; f0 < 3; ++f0)
        for (unsigned f1 = 0; f1 < 3; ++f1) {
            const FunctionTable f(3, {f0, f1});
            const auto steps = trace_small(f, SmallCase::two_trits);
            REQUIRE(steps.size() == 4);
            const double c = 1 / std::sqrt(2.0);

            // oracle kickback: phases ω^{f(1)} and ω^{-f(0)}
            std::vector<cx> want(6, cx{0, 0});
            add_component(want, 3, c * root_of_unity(3, f1), 1, 1);
            add_component(want, 3, c * root_of_unity(3, -(long long)f0), 0, 2);
            CHECK(max_diff(steps[1], want) < tight);

            // position shift
            want.assign(6, cx{0, 0});
            add_component(want, 3, c * root_of_unity(3, f1), 0, 1);
            add_component(want, 3, c * root_of_unity(3, -(long long)f0), 1, 2);
            CHECK(max_diff(steps[2], want) < tight);

            // gather swaps |1⟩|ω^2⟩ into |0⟩|ω^0⟩
            want.assign(6, cx{0, 0});
            add_component(want, 3, c * root_of_unity(3, f1), 0, 1);
            add_component(want, 3, c * root_of_unity(3, -(long long)f0), 0, 0);
            CHECK(max_diff(steps[3], want) < tight);

            CHECK(phase_equal(steps[3], collapsed_reference(2, 3, 2, (f0 + f1) % 3),
                              tight));
        }
}

TEST_CASE("three-trit trace: every step matches the hand-worked states") {
    for (unsigned f0 = 0; f0 < 3; ++f0)
        for (unsigned f1 = 0; f1 < 3; ++f1)
            for (unsigned f2 = 0; f2 < 3; ++f2) {
                const FunctionTable f(3, {f0, f1, f2});
                const auto steps = trace_small(f, SmallCase::three_trits);
                REQUIRE(steps.size() == 7);
                const double c = 1 / std::sqrt(3.0);
                const long long g0 = f0, g1 = f1, g2 = f2;

                std::vector<cx> want(9, cx{0, 0});
                add_component(want, 3, c * root_of_unity(3, g1), 1, 1);
                add_component(want, 3, c * root_of_unity(3, -g0), 0, 2);
                add_component(want, 3, c * root_of_unity(3, -2 * g0), 0, 1);
                CHECK(max_diff(steps[1], want) < tight);

                want.assign(9, cx{0, 0});
                add_component(want, 3, c * root_of_unity(3, g1), 2, 1);
                add_component(want, 3, c * root_of_unity(3, -g0), 1, 2);
                add_component(want, 3, c * root_of_unity(3, -2 * g0), 1, 1);
                CHECK(max_diff(steps[2], want) < tight);

                // relay: a=2 hops forward to |ω^1⟩, a=1 advances to |ω^2⟩
                want.assign(9, cx{0, 0});
                add_component(want, 3, c * root_of_unity(3, g1), 2, 2);
                add_component(want, 3, c * root_of_unity(3, -g0), 2, 1);
                add_component(want, 3, c * root_of_unity(3, -2 * g0), 1, 2);
                CHECK(max_diff(steps[3], want) < tight);

                want.assign(9, cx{0, 0});
                add_component(want, 3, c * root_of_unity(3, g1 + 2 * g2), 2, 2);
                add_component(want, 3, c * root_of_unity(3, -g0 + g2), 2, 1);
                add_component(want, 3, c * root_of_unity(3, -2 * g0 + 2 * g1), 1, 2);
                CHECK(max_diff(steps[4], want) < tight);

                want.assign(9, cx{0, 0});
                add_component(want, 3, c * root_of_unity(3, g1 + 2 * g2), 0, 2);
                add_component(want, 3, c * root_of_unity(3, -g0 + g2), 0, 1);
                add_component(want, 3, c * root_of_unity(3, -2 * g0 + 2 * g1), 2, 2);
                CHECK(max_diff(steps[5], want) < tight);

                want.assign(9, cx{0, 0});
                add_component(want, 3, c * root_of_unity(3, g1 + 2 * g2), 0, 2);
                add_component(want, 3, c * root_of_unity(3, -g0 + g2), 0, 1);
                add_component(want, 3, c * root_of_unity(3, -2 * g0 + 2 * g1), 0, 0);
                CHECK(max_diff(steps[6], want) < tight);

                CHECK(phase_equal(
                    steps[6], collapsed_reference(3, 3, 3, (f0 + f1 + f2) % 3), tight));
            }
}

TEST_CASE("trace_small validates the table shape") {
    CHECK_THROWS_AS(trace_small(FunctionTable(3, {0, 1, 2}), SmallCase::two_trits),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_small(FunctionTable(2, {0, 1}), SmallCase::three_trits),
                    std::invalid_argument);
    CHECK_THROWS_AS(trace_small(FunctionTable(4, {0, 1}), SmallCase::two_trits),
                    std::invalid_argument);
}

TEST_CASE("trace endpoint agrees with run_core") {
    const FunctionTable f(3, {2, 1, 2});
    const auto steps = trace_small(f, SmallCase::three_trits);
    const JointState direct = run_core(f, 1);
    CHECK(max_diff(direct, steps.back().amps()) < tight);
}

TEST_CASE("run_core collapses the position register and leaves the estimator") {
    for (std::size_t k = 2; k <= 6; ++k)
        for (std::size_t s = 2; s <= k; ++s)
            for (std::size_t r = 1; r <= 3; ++r) {
                const std::size_t n = r * s;
                for (std::size_t salt = 0; salt < 3; ++salt) {
                    const FunctionTable f = synth(n, k, salt);
                    const JointState out = run_core(f, r);
                    CHECK(out.position_prob(0) == doctest::Approx(1.0).epsilon(tight));
                    CHECK(phase_equal(out, collapsed_reference(n, k, s, f.sum()), tight));
                    const OutcomeDistribution dist = measure_second_register(out);
                    for (std::size_t y = 0; y < k; ++y)
                        CHECK(dist[y] ==
                              doctest::Approx(estimator_prob(k, s, f.sum(), y))
                                  .epsilon(1e-9));
                }
            }
}

TEST_CASE("run_core: pinned instance n=4, k=4, r=2") {
    // Σf = 8 ≡ 0 (mod 4)
    const FunctionTable f(4, {1, 3, 2, 2});
    const JointState out = run_core(f, 2);
    CHECK(phase_equal(out, collapsed_reference(4, 4, 2, 0), tight));
    CHECK(measure_second_register(out)[0] == doctest::Approx(0.5).epsilon(tight));
}

TEST_CASE("run_core validation") {
    const FunctionTable f(3, {0, 1, 2, 0});
    CHECK_THROWS_AS(run_core(f, 3), std::invalid_argument);   // 3 does not divide 4
    CHECK_THROWS_AS(run_core(f, 4), std::invalid_argument);   // s = 1
    CHECK_THROWS_AS(run_core(f, 1), std::invalid_argument);   // s = 4 > k
    CHECK_THROWS_AS(run_core(f, 0), std::invalid_argument);
}

TEST_CASE("classical_read returns the table value") {
    const FunctionTable f = synth(7, 5, 1);
    for (std::size_t x = 0; x < 7; ++x) CHECK(classical_read(f, x) == f(x));
    CHECK_THROWS_AS(classical_read(f, 7), std::invalid_argument);
}

TEST_CASE("plan: pinned shapes") {
    {
        const ExecutionPlan p = plan(7, 3, 2);
        REQUIRE(p.segments.size() == 2);
        const auto& cb = std::get<CoreBlock>(p.segments[0]);
        CHECK(cb.offset == 0);
        CHECK(cb.length == 6);
        CHECK(cb.step == 2);
        CHECK(cb.blocks == 3);
        CHECK(std::get<ClassicalRead>(p.segments[1]).position == 6);
        CHECK(p.total_queries == 5);
        CHECK(p.unused_queries == 0);
    }
    {
        const ExecutionPlan p = plan(6, 2, 1);
        REQUIRE(p.segments.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            const auto& cb = std::get<CoreBlock>(p.segments[i]);
            CHECK(cb.offset == 2 * i);
            CHECK(cb.length == 2);
            CHECK(cb.step == 1);
            CHECK(cb.blocks == 2);
        }
        CHECK(p.total_queries == 5);
        CHECK(p.unused_queries == 2);
    }
    {
        const ExecutionPlan p = plan(4, 3, 3);
        REQUIRE(p.segments.size() == 2);
        const auto& gb = std::get<GuessBlock>(p.segments[0]);
        CHECK(gb.offset == 0);
        CHECK(gb.length == 3);
        CHECK(std::get<ClassicalRead>(p.segments[1]).position == 3);
        CHECK(p.total_queries == 1);
        CHECK(p.unused_queries == 0);
    }
    {
        const ExecutionPlan p = plan(5, 4, 5);
        REQUIRE(p.segments.size() == 1);
        CHECK(std::get<GuessBlock>(p.segments[0]).length == 5);
        CHECK(p.total_queries == 0);
    }
}

TEST_CASE("plan: segments partition [0, n) and the query budget balances") {
    for (std::size_t n = 1; n <= 10; ++n)
        for (std::size_t k = 2; k <= 5; ++k)
            for (std::size_t r = 1; r <= n; ++r) {
                const ExecutionPlan p = plan(n, k, r);
                CHECK(p.total_queries == n - r);
                std::size_t cursor = 0, spent = 0;
                for (const Segment& seg : p.segments) {
                    if (const auto* cb = std::get_if<CoreBlock>(&seg)) {
                        CHECK(cb->offset == cursor);
                        CHECK(cb->length == cb->step * cb->blocks);
                        CHECK(cb->blocks >= 2);
                        CHECK(cb->blocks <= k);
                        cursor += cb->length;
                        spent += cb->step * (cb->blocks - 1);
                    } else if (const auto* rd = std::get_if<ClassicalRead>(&seg)) {
                        CHECK(rd->position == cursor);
                        cursor += 1;
                        spent += 1;
                    } else {
                        const auto& gb = std::get<GuessBlock>(seg);
                        CHECK(gb.offset == cursor);
                        cursor += gb.length;
                    }
                }
                CHECK(cursor == n);
                CHECK(spent + p.unused_queries == n - r);
            }
    CHECK_THROWS_AS(plan(4, 3, 0), std::invalid_argument);
    CHECK_THROWS_AS(plan(4, 3, 5), std::invalid_argument);
    CHECK_THROWS_AS(plan(4, 1, 1), std::invalid_argument);
}

TEST_CASE("run_sum: success matches the closed form on a full grid") {
    for (std::size_t n = 1; n <= 8; ++n)
        for (std::size_t k = 2; k <= 5; ++k)
            for (std::size_t r = 1; r <= n; ++r) {
                const FunctionTable f = synth(n, k, (n + k + r) % 4);
                const RunReport rep = run_sum(f, r);
                CHECK(rep.queries_used == n - r);
                CHECK(rep.params.s == n / r);
                double mass = 0;
                for (std::size_t y = 0; y < k; ++y) mass += rep.distribution[y];
                CHECK(mass == doctest::Approx(1.0).epsilon(tight));
                const double want = to_double(success_probability(n, k, r));
                CHECK(rep.success_prob == doctest::Approx(want).epsilon(1e-9));
                CHECK(rep.success_prob ==
                      doctest::Approx(rep.distribution[f.sum()]).epsilon(tight));
            }
}

TEST_CASE("run_sum: success is identical across oracles") {
    const std::size_t n = 5, k = 3;
    for (std::size_t r = 1; r <= n; ++r) {
        double first = -1;
        for (std::size_t salt = 0; salt < 6; ++salt) {
            const RunReport rep = run_sum(synth(n, k, salt), r);
            if (first < 0)
                first = rep.success_prob;
            else
                CHECK(rep.success_prob == doctest::Approx(first).epsilon(tight));
        }
    }
}

TEST_CASE("run_sum: reported radii and masses") {
    const FunctionTable f = synth(8, 5, 2);
    const RunReport rep = run_sum(f, 2);  // s = 4
    CHECK(rep.approx_radius == 5 * 2 / 16);
    CHECK(rep.central_radius == 5 / 8);
    CHECK(rep.approx_prob ==
          doctest::Approx(rep.distribution.mass_within(f.sum(), rep.approx_radius))
              .epsilon(tight));
    CHECK(rep.central_prob ==
          doctest::Approx(rep.distribution.mass_within(f.sum(), rep.central_radius))
              .epsilon(tight));

    const RunReport wide = run_sum(synth(8, 12, 1), 4);  // s = 2, radius k/4 = 3
    CHECK(wide.central_radius == 3);
    CHECK(wide.central_prob >= 4.0 / (3.141592653589793 * 3.141592653589793));
}

TEST_CASE("run_sum: surplus branch spends idle queries") {
    const FunctionTable f = synth(6, 2, 3);
    const RunReport rep = run_sum(f, 1);
    CHECK(rep.queries_used == 5);
    CHECK(rep.queries_unused == 2);
    CHECK(rep.success_prob == doctest::Approx(1.0).epsilon(tight));
}

TEST_CASE("run_sum: guess branch is uniform") {
    const FunctionTable f = synth(4, 3, 0);
    const RunReport rep = run_sum(f, 3);  // guess [0,3), read 3
    for (std::size_t y = 0; y < 3; ++y)
        CHECK(rep.distribution[y] == doctest::Approx(1.0 / 3.0).epsilon(tight));
}

TEST_CASE("run_sum: sampling is seeded and reproducible") {
    const FunctionTable f = synth(6, 3, 1);
    const RunReport a = run_sum(f, 2, 12345);
    const RunReport b = run_sum(f, 2, 12345);
    REQUIRE(a.sampled_prediction.has_value());
    REQUIRE(b.sampled_prediction.has_value());
    CHECK(*a.sampled_prediction == *b.sampled_prediction);
    CHECK(*a.sampled_prediction < 3);
    CHECK(a.seed == 12345);

    const RunReport c = run_sum(f, 2);
    CHECK_FALSE(c.sampled_prediction.has_value());
    CHECK_FALSE(c.seed.has_value());

    // empirical frequencies over many draws stay within 5σ of the exact law;
    // r = 3 gives a spread-out law (peak 2/3) rather than a point mass
    const RunReport spread = run_sum(f, 3);
    std::mt19937_64 rng(99);
    std::vector<std::size_t> counts(3, 0);
    const std::size_t draws = 100000;
    for (std::size_t i = 0; i < draws; ++i) ++counts[spread.distribution.sample(rng)];
    for (std::size_t y = 0; y < 3; ++y) {
        const double p = spread.distribution[y];
        const double sigma = std::sqrt(std::max(0.0, p * (1 - p)) * double(draws));
        CHECK(std::abs(double(counts[y]) - p * double(draws)) < 5 * sigma + 1);
    }
}

TEST_CASE("run_sum is deterministic") {
    const FunctionTable f = synth(7, 4, 2);
    const RunReport a = run_sum(f, 2);
    const RunReport b = run_sum(f, 2);
    CHECK(a.distribution.probs() == b.distribution.probs());
    CHECK(a.success_prob == b.success_prob);
}
