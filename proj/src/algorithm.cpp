#include "qsum/algorithm.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace qsum {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// The core circuit with every oracle-matrix application counted.
JointState run_core_counted(const FunctionTable& f, std::size_t r, std::size_t& queries) {
    const std::size_t n = f.n(), k = f.k();
    require(r >= 1 && r <= n, "run_core: need 1 <= r <= n");
    require(n % r == 0, "run_core: r must divide n");
    const std::size_t s = n / r;
    require(s >= 2, "run_core: need n/r >= 2");
    require(s <= k, "run_core: need n/r <= k");

    const UnitaryOp oracle = oracle_op(f);
    const UnitaryOp hop = tensor(shift_op(n), UnitaryOp::identity(k));
    std::optional<UnitaryOp> relay;
    if (s >= 3) relay = relay_op(n, k, r);

    JointState state = initial_state(n, k, r, s);
    for (std::size_t round = 0; round + 1 < s; ++round) {
        if (round > 0) state = relay->apply(state);
        for (std::size_t i = 0; i < r; ++i) {
            state = oracle.apply(state);
            state = hop.apply(state);
            ++queries;
        }
    }
    return gather_op(n, k, r).apply(state);
}

std::size_t classical_read_counted(const FunctionTable& f, std::size_t x,
                                   std::size_t& queries) {
    require(x < f.n(), "classical_read: position out of range");
    const FunctionTable probe = f.slice(x, 1);
    const JointState state = oracle_op(probe).apply(JointState::basis(1, f.k(), 0, 0));
    ++queries;
    const OutcomeDistribution dist = measure_second_register(state);
    for (std::size_t y = 0; y < dist.k(); ++y)
        if (dist[y] > 0.5) return y;
    throw std::logic_error("classical_read: query produced no definite value");
}

// One oracle call whose outcome is never consulted; spends a surplus query.
void idle_probe(const FunctionTable& f, std::size_t& queries) {
    std::size_t discarded = classical_read_counted(f, 0, queries);
    (void)discarded;
}

// distribution of (lhs + rhs) mod k for independent summands
std::vector<double> convolve(const std::vector<double>& lhs,
                             const std::vector<double>& rhs) {
    const std::size_t k = lhs.size();
    std::vector<double> out(k, 0.0);
    for (std::size_t j = 0; j < k; ++j) {
        if (lhs[j] == 0.0) continue;
        for (std::size_t m = 0; m < k; ++m) out[(j + m) % k] += lhs[j] * rhs[m];
    }
    return out;
}

}  // namespace

AlgorithmParams::AlgorithmParams(std::size_t n, std::size_t k, std::size_t r)
    : n(n), k(k), r(r), s(0), w(0) {
    require(n >= 1, "AlgorithmParams: n must be >= 1");
    require(k >= 2, "AlgorithmParams: k must be >= 2");
    require(r >= 1 && r <= n, "AlgorithmParams: need 1 <= r <= n");
    s = n / r;
    w = n - r * s;
}

JointState initial_state(std::size_t n, std::size_t k, std::size_t r, std::size_t s) {
    require(k >= 2, "initial_state: k must be >= 2");
    require(s >= 2 && s <= k, "initial_state: need 2 <= s <= k");
    require(r >= 1 && r * s <= n, "initial_state: need 1 <= r and r*s <= n");
    const double scale = 1.0 / std::sqrt(static_cast<double>(s));
    std::vector<cx> amps(n * k, cx{0, 0});
    const StateVector head = fourier_state(k, 1);
    for (std::size_t m = 0; m < k; ++m) amps[r * k + m] = scale * head[m];
    for (std::size_t t = 1; t < s; ++t) {
        const StateVector tail = fourier_state(k, k - t);
        for (std::size_t m = 0; m < k; ++m) amps[m] += scale * tail[m];
    }
    return JointState(n, k, std::move(amps));
}

JointState run_core(const FunctionTable& f, std::size_t r) {
    std::size_t queries = 0;
    return run_core_counted(f, r, queries);
}

std::size_t classical_read(const FunctionTable& f, std::size_t x) {
    std::size_t queries = 0;
    return classical_read_counted(f, x, queries);
}

ExecutionPlan plan(std::size_t n, std::size_t k, std::size_t r) {
    AlgorithmParams params(n, k, r);
    ExecutionPlan out{params, {}, n - r, 0};
    const std::size_t s = params.s;
    if (s == 1) {
        out.segments.push_back(GuessBlock{0, r});
        for (std::size_t x = r; x < n; ++x) out.segments.push_back(ClassicalRead{x});
        return out;
    }
    const std::size_t core_len = r * s;
    if (s <= k) {
        out.segments.push_back(CoreBlock{0, core_len, r, s});
    } else {
        const std::size_t u = core_len / k, v = core_len % k;
        for (std::size_t i = 0; i < u; ++i)
            out.segments.push_back(CoreBlock{i * k, k, 1, k});
        for (std::size_t j = 0; j < v; ++j)
            out.segments.push_back(ClassicalRead{u * k + j});
        out.unused_queries = u - r;
    }
    for (std::size_t x = core_len; x < n; ++x)
        out.segments.push_back(ClassicalRead{x});
    return out;
}

RunReport run_sum(const FunctionTable& f, std::size_t r,
                  std::optional<std::uint64_t> seed) {
    const ExecutionPlan laid = plan(f.n(), f.k(), r);
    const std::size_t k = f.k();

    std::size_t queries = 0;
    std::vector<double> dist(k, 0.0);
    dist[0] = 1.0;
    for (const Segment& seg : laid.segments) {
        if (const auto* cb = std::get_if<CoreBlock>(&seg)) {
            const FunctionTable part = f.slice(cb->offset, cb->length);
            const JointState state = run_core_counted(part, cb->step, queries);
            dist = convolve(dist, measure_second_register(state).probs());
        } else if (const auto* rd = std::get_if<ClassicalRead>(&seg)) {
            const std::size_t y = classical_read_counted(f, rd->position, queries);
            std::vector<double> point(k, 0.0);
            point[y] = 1.0;
            dist = convolve(dist, point);
        } else {
            dist = convolve(dist, std::vector<double>(k, 1.0 / static_cast<double>(k)));
        }
    }
    for (std::size_t i = 0; i < laid.unused_queries; ++i) idle_probe(f, queries);
    if (queries != laid.total_queries)
        throw std::logic_error("run_sum: query accounting out of balance");

    OutcomeDistribution law(std::move(dist));
    const unsigned total = f.sum();
    const std::size_t approx_radius = k * laid.params.r / (2 * laid.params.n);
    const std::size_t central_radius = k / (2 * laid.params.s);
    std::optional<std::size_t> prediction;
    if (seed) {
        std::mt19937_64 rng(*seed);
        prediction = law.sample(rng);
    }
    const double success = law[total];
    const double approx_prob = law.mass_within(total, approx_radius);
    const double central_prob = law.mass_within(total, central_radius);
    return RunReport{laid.params, std::move(law),    success,
                     approx_radius, approx_prob,     central_radius,
                     central_prob,  queries,         laid.unused_queries,
                     seed,          prediction};
}

std::vector<JointState> trace_small(const FunctionTable& f, SmallCase which) {
    const std::size_t n = which == SmallCase::two_trits ? 2 : 3;
    require(f.n() == n && f.k() == 3,
            "trace_small: table shape does not match the requested case");
    const std::size_t k = 3, r = 1, s = n;
    const UnitaryOp oracle = oracle_op(f);
    const UnitaryOp hop = tensor(shift_op(n), UnitaryOp::identity(k));
    std::vector<JointState> steps;
    steps.push_back(initial_state(n, k, r, s));
    for (std::size_t round = 0; round + 1 < s; ++round) {
        if (round > 0) steps.push_back(relay_op(n, k, r).apply(steps.back()));
        steps.push_back(oracle.apply(steps.back()));
        steps.push_back(hop.apply(steps.back()));
    }
    steps.push_back(gather_op(n, k, r).apply(steps.back()));
    return steps;
}

}  // namespace qsum
