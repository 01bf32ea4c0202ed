#include "qsum/verify.hpp"

#include "qsum/analysis.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace qsum {

namespace {

constexpr double mass_floor = 4.0 / (std::numbers::pi * std::numbers::pi);

#if defined(__GNUC__)
__attribute__((format(printf, 1, 2)))
#endif
std::string
fmt(const char* pattern, ...) {
    char buf[256];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return std::string(buf);
}

struct Recorder {
    std::vector<CheckResult>& out;

    void add(std::string name, std::string instance, std::string expected,
             std::string observed, bool pass) {
        out.push_back({std::move(name), std::move(instance), std::move(expected),
                       std::move(observed), pass});
    }
};

std::size_t table_count(std::size_t n, std::size_t k, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / k)
            throw std::invalid_argument("enumerate_oracles: k^n exceeds the cap");
        total *= k;
    }
    return total;
}

FunctionTable synth(std::size_t n, std::size_t k, std::size_t salt) {
    std::vector<unsigned> vals(n);
    for (std::size_t x = 0; x < n; ++x)
        vals[x] = static_cast<unsigned>((x * 13 + 7 * salt + salt * salt) % k);
    return FunctionTable(k, std::move(vals));
}

void add_component(std::vector<cx>& amps, std::size_t k, cx coeff, std::size_t x,
                   std::size_t a) {
    const StateVector comp = fourier_state(k, a % k);
    for (std::size_t m = 0; m < k; ++m) amps[x * k + m] += coeff * comp[m];
}

// largest entry deviation after modding out one global phase
double phase_deviation(const JointState& got, const JointState& want) {
    const auto& u = got.amps();
    const auto& v = want.amps();
    cx inner{0, 0};
    for (std::size_t i = 0; i < u.size(); ++i) inner += std::conj(v[i]) * u[i];
    const double mag = std::abs(inner);
    const cx phase = mag > 0 ? inner / mag : cx{1, 0};
    double dev = 0;
    for (std::size_t i = 0; i < u.size(); ++i)
        dev = std::max(dev, std::abs(u[i] - phase * v[i]));
    return dev;
}

double entry_gap(const UnitaryOp& a, const UnitaryOp& b) {
    double gap = 0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        gap = std::max(gap, std::abs(a.entries()[i] - b.entries()[i]));
    return gap;
}

void check_operators(const GridSpec& grid, double tight, Recorder& rec) {
    for (std::size_t n = 1; n <= grid.max_n; ++n)
        for (std::size_t k = 2; k <= grid.max_k; ++k) {
            const std::string inst = fmt("n=%zu k=%zu", n, k);

            double gap = std::max(shift_op(n).unitarity_gap(),
                                  fourier_op(k).unitarity_gap());
            for (std::size_t salt = 0; salt < 3; ++salt)
                gap = std::max(gap, oracle_op(synth(n, k, salt)).unitarity_gap());
            for (std::size_t r = 1; r <= n; ++r) {
                gap = std::max(gap, gather_op(n, k, r).unitarity_gap());
                gap = std::max(gap, relay_op(n, k, r).unitarity_gap());
            }
            rec.add("operator_unitarity", inst,
                    fmt("every builder has unitarity gap <= %.3e", tight),
                    fmt("max gap %.3e", gap), gap <= tight);

            double kick = 0;
            for (std::size_t salt = 0; salt < 3; ++salt) {
                const FunctionTable f = synth(n, k, salt);
                const UnitaryOp oracle = oracle_op(f);
                for (std::size_t x = 0; x < n; ++x)
                    for (std::size_t a = 0; a < k; ++a) {
                        std::vector<cx> in(n * k, cx{0, 0});
                        add_component(in, k, cx{1, 0}, x, a);
                        const JointState got = oracle.apply(JointState(n, k, in));
                        std::vector<cx> want(n * k, cx{0, 0});
                        add_component(want, k,
                                      root_of_unity(k, static_cast<long long>(a) * f(x)),
                                      x, a);
                        for (std::size_t i = 0; i < want.size(); ++i)
                            kick = std::max(kick, std::abs(got.amps()[i] - want[i]));
                    }
            }
            rec.add("phase_kickback", inst,
                    "oracle on |x>|w^a> multiplies by w^(a f(x))",
                    fmt("max deviation %.3e", kick), kick <= tight);

            double comp = 0;
            for (std::size_t salt = 0; salt < 2; ++salt) {
                const FunctionTable f = synth(n, k, salt);
                const FunctionTable g = synth(n, k, salt + 1);
                std::vector<unsigned> merged(n);
                for (std::size_t x = 0; x < n; ++x)
                    merged[x] = (f(x) + g(x)) % static_cast<unsigned>(k);
                comp = std::max(comp, entry_gap(oracle_op(f) * oracle_op(g),
                                                oracle_op(FunctionTable(k, merged))));
            }
            rec.add("oracle_composition", inst, "O_f O_g equals O_(f+g) entrywise",
                    fmt("max entry gap %.3e", comp), comp <= tight);
        }
}

void check_estimator(const GridSpec& grid, double tight, Recorder& rec) {
    for (std::size_t k = 2; k <= 2 * grid.max_k; ++k) {
        double law = 0, mass_dev = 0, peak_dev = 0;
        bool unique = true;
        double margin = 1e300;
        for (std::size_t s = 1; s <= k; ++s) {
            for (std::size_t a : {std::size_t{0}, k / 2, k - 1}) {
                const StateVector state = estimator_state(k, s, a);
                const double peak = static_cast<double>(s) / static_cast<double>(k);
                double sum = 0;
                for (std::size_t y = 0; y < k; ++y) {
                    const double p = estimator_prob(k, s, a, y);
                    law = std::max(law, std::abs(std::norm(state[y]) - p));
                    sum += p;
                    if (s >= 2 && y != a && p >= peak - 1e-12) unique = false;
                }
                mass_dev = std::max(mass_dev, std::abs(sum - 1.0));
                peak_dev = std::max(peak_dev, std::abs(estimator_prob(k, s, a, a) - peak));
            }
            margin = std::min(margin, central_mass(k, s) - mass_floor);
        }
        const std::string inst = fmt("k=%zu", k);
        rec.add("estimator_law", inst,
                "closed form equals the amplitude law; total mass 1",
                fmt("max dev %.3e, mass dev %.3e", law, mass_dev),
                law <= tight && mass_dev <= tight);
        rec.add("estimator_peak", inst,
                "peak value s/k at the true residue, strict maximum for s >= 2",
                fmt("peak dev %.3e, unique=%s", peak_dev, unique ? "yes" : "no"),
                peak_dev <= tight && unique);
        rec.add("estimator_central_mass", inst,
                "mass within floor(k/2s) of the peak >= 4/pi^2",
                fmt("min margin %+.3e", margin), margin >= -tight);
    }
}

void check_traces(const GridSpec& grid, double tol, double tight, Recorder& rec) {
    if (grid.max_n < 2 || grid.max_k < 3) return;
    {
        double dev = 0, succ = 0;
        for (const FunctionTable& f : enumerate_oracles(2, 3, grid.oracle_cap)) {
            const auto got = trace_small(f, SmallCase::two_trits);
            const auto want = reference_trace(f, SmallCase::two_trits);
            for (std::size_t i = 0; i < got.size(); ++i)
                dev = std::max(dev, phase_deviation(got[i], want[i]));
            succ = std::max(succ, std::abs(run_sum(f, 1).success_prob - 2.0 / 3.0));
        }
        rec.add("two_trit_trace", "n=2 k=3 r=1",
                "every circuit step phase-matches its displayed state",
                fmt("max step deviation %.3e over 9 tables", dev), dev <= tight);
        rec.add("two_trit_success", "n=2 k=3 r=1", "success 2/3 for every table",
                fmt("max deviation %.3e", succ), succ <= tol);
    }
    if (grid.max_n < 3) return;
    double dev = 0, succ = 0;
    for (const FunctionTable& f : enumerate_oracles(3, 3, grid.oracle_cap)) {
        const auto got = trace_small(f, SmallCase::three_trits);
        const auto want = reference_trace(f, SmallCase::three_trits);
        for (std::size_t i = 0; i < got.size(); ++i)
            dev = std::max(dev, phase_deviation(got[i], want[i]));
        succ = std::max(succ, std::abs(run_sum(f, 1).success_prob - 1.0));
    }
    rec.add("three_trit_trace", "n=3 k=3 r=1",
            "every circuit step phase-matches its displayed state",
            fmt("max step deviation %.3e over 27 tables", dev), dev <= tight);
    rec.add("three_trit_success", "n=3 k=3 r=1", "success 1 for every table",
            fmt("max deviation %.3e", succ), succ <= tol);
}

void check_phase_split(const GridSpec& grid, double tight, Recorder& rec) {
    for (std::size_t n = 1; n <= grid.max_n; ++n)
        for (std::size_t k = 2; k <= grid.max_k; ++k) {
            const auto tables = enumerate_oracles(n, k, grid.oracle_cap);
            double worst = 0;
            for (std::size_t r = 1; r <= n; ++r) {
                if (n % r != 0 || n / r > k) continue;
                for (const FunctionTable& f : tables)
                    worst = std::max(worst, block_phase_gap(f, r));
            }
            rec.add("phase_split_identity", fmt("n=%zu k=%zu", n, k),
                    "identity gap <= tolerance for every oracle and every r | n",
                    fmt("max gap %.3e", worst), worst <= tight);
        }
}

void check_sum_grid(const GridSpec& grid, double tol, Recorder& rec) {
    for (std::size_t n = 1; n <= grid.max_n; ++n)
        for (std::size_t k = 2; k <= grid.max_k; ++k) {
            const auto tables = enumerate_oracles(n, k, grid.oracle_cap);
            for (std::size_t r = 1; r <= n; ++r) {
                const double want = to_double(success_probability(n, k, r));
                double lo = 2, hi = -1, fdev = 0, approx_min = 2;
                std::size_t off_budget = 0;
                for (const FunctionTable& f : tables) {
                    const RunReport rep = run_sum(f, r);
                    lo = std::min(lo, rep.success_prob);
                    hi = std::max(hi, rep.success_prob);
                    fdev = std::max(fdev, std::abs(rep.success_prob - want));
                    if (rep.queries_used != n - r) ++off_budget;
                    approx_min = std::min(approx_min, rep.approx_prob);
                }
                const std::string inst = fmt("n=%zu k=%zu r=%zu", n, k, r);
                rec.add("success_formula", inst,
                        fmt("success %.12g for every oracle", want),
                        fmt("min %.12g max %.12g", lo, hi), fdev <= tol);
                rec.add("per_oracle_uniformity", inst,
                        "success spread over all oracles within tolerance",
                        fmt("spread %.3e", hi - lo), hi - lo <= tol);
                rec.add("query_accounting", inst,
                        fmt("exactly %zu oracle applications per run", n - r),
                        fmt("%zu tables off budget", off_budget), off_budget == 0);
                if (n % r == 0)
                    rec.add("approx_band", inst,
                            "mass within floor(kr/2n) of the true sum >= 4/pi^2",
                            fmt("min mass %.12g", approx_min),
                            approx_min >= mass_floor - tol);
                if (n / r == 1)
                    rec.add("useless_region", inst,
                            fmt("success exactly 1/k = %.12g", 1.0 / double(k)),
                            fmt("max deviation %.3e", fdev), fdev <= tol);
            }
        }
}

void check_reads(const GridSpec& grid, Recorder& rec) {
    for (std::size_t n = 1; n <= grid.max_n; ++n)
        for (std::size_t k = 2; k <= grid.max_k; ++k) {
            std::size_t bad = 0;
            for (std::size_t salt = 0; salt < 3; ++salt) {
                const FunctionTable f = synth(n, k, salt);
                for (std::size_t x = 0; x < n; ++x)
                    if (classical_read(f, x) != f(x)) ++bad;
            }
            rec.add("classical_read_exact", fmt("n=%zu k=%zu", n, k),
                    "one query returns f(x) exactly", fmt("%zu mismatches", bad),
                    bad == 0);
        }
}

void check_curves(const GridSpec& grid, Recorder& rec) {
    for (std::size_t n = 1; n <= grid.max_n; ++n)
        for (std::size_t k = 2; k <= grid.max_k; ++k) {
            const std::string inst = fmt("n=%zu k=%zu", n, k);
            BigInt den = 1;
            for (std::size_t i = 0; i < n; ++i) den *= k;
            const bool edges = vandam_identify_prob(n, k, 0) == Rational(1, den) &&
                               vandam_identify_prob(n, k, n) == Rational(1);
            rec.add("identify_prob_edges", inst, "p_0 = k^-n and p_n = 1 exactly",
                    fmt("p_0 = %s", fraction_string(vandam_identify_prob(n, k, 0)).c_str()),
                    edges);

            const SweepCurves curves = sweep_curves(n, k);
            bool monotone = true, bound_form = true, dominates = true;
            Rational margin(2), prev(0);
            for (std::size_t q = 0; q <= n; ++q) {
                const Rational p = vandam_identify_prob(n, k, q);
                if (p < prev) monotone = false;
                prev = p;
                if (curves.bound.points[q].p !=
                    p + (Rational(1) - p) / Rational(static_cast<unsigned>(k)))
                    bound_form = false;
                const Rational step = curves.success.points[q].p;
                if (step < p) dominates = false;
                if (step - p < margin) margin = step - p;
            }
            rec.add("identify_monotone", inst, "p_q nondecreasing in q",
                    monotone ? "nondecreasing" : "violated", monotone);
            rec.add("sum_bound_form", inst, "bound = p + (1-p)/k exactly",
                    bound_form ? "exact" : "violated", bound_form);
            rec.add("curve_dominance", inst,
                    "step curve >= identification probability at every q",
                    fmt("min margin %s", fraction_string(margin).c_str()), dominates);

            bool shape = curves.success.points.front().p ==
                             Rational(1, static_cast<unsigned>(k)) &&
                         curves.success.points.back().p == Rational(1);
            Rational last(0);
            const std::size_t certain = n - n / k;
            for (std::size_t q = 0; q <= n; ++q) {
                const Rational step = curves.success.points[q].p;
                if (step < last) shape = false;
                last = step;
                if (q <= (n - 1) / 2 && step != Rational(1, static_cast<unsigned>(k)))
                    shape = false;
                if ((step == Rational(1)) != (q >= certain)) shape = false;
            }
            rec.add("curve_shape", inst,
                    fmt("flat 1/k through q = %zu, first 1 at q = %zu, monotone",
                        (n - 1) / 2, certain),
                    shape ? "as expected" : "violated", shape);
        }

    if (grid.max_n >= 3 && grid.max_k >= 3) {
        const Rational p = vandam_identify_prob(3, 3, 1);
        const Rational b = vandam_sum_bound(3, 3, 1);
        rec.add("identify_values", "n=3 k=3 q=1", "p = 7/27 and bound = 41/81",
                fmt("p = %s, bound = %s", fraction_string(p).c_str(),
                    fraction_string(b).c_str()),
                p == Rational(7, 27) && b == Rational(41, 81));
    }
}

}  // namespace

std::vector<FunctionTable> enumerate_oracles(std::size_t n, std::size_t k,
                                             std::size_t cap) {
    if (n < 1) throw std::invalid_argument("enumerate_oracles: n must be >= 1");
    if (k < 2) throw std::invalid_argument("enumerate_oracles: k must be >= 2");
    const std::size_t total = table_count(n, k, cap);
    std::vector<FunctionTable> out;
    out.reserve(total);
    std::vector<unsigned> vals(n, 0);
    for (std::size_t i = 0; i < total; ++i) {
        out.emplace_back(k, vals);
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (vals[pos] + 1 < k) {
                ++vals[pos];
                break;
            }
            vals[pos] = 0;
        }
    }
    return out;
}

SuccessSummary exhaustive_success(std::size_t n, std::size_t k, std::size_t r,
                                  std::size_t cap) {
    AlgorithmParams(n, k, r);  // validate before enumerating
    const auto tables = enumerate_oracles(n, k, cap);
    double lo = 2, hi = -1, sum = 0;
    for (const FunctionTable& f : tables) {
        const double p = run_sum(f, r).success_prob;
        lo = std::min(lo, p);
        hi = std::max(hi, p);
        sum += p;
    }
    return {lo, hi, sum / static_cast<double>(tables.size())};
}

std::vector<JointState> reference_trace(const FunctionTable& f, SmallCase which) {
    const std::size_t n = which == SmallCase::two_trits ? 2 : 3;
    if (f.n() != n || f.k() != 3)
        throw std::invalid_argument(
            "reference_trace: table shape does not match the requested case");
    const std::size_t k = 3;
    const long long f0 = f(0), f1 = f(1);

    std::vector<JointState> steps;
    using Component = std::tuple<long long, std::size_t, std::size_t>;
    auto push = [&](std::initializer_list<Component> comps) {
        std::vector<cx> amps(n * k, cx{0, 0});
        const double c = 1 / std::sqrt(static_cast<double>(n));
        for (const auto& [phase, x, a] : comps)
            add_component(amps, k, c * root_of_unity(k, phase), x, a);
        steps.push_back(JointState(n, k, std::move(amps)));
    };

    if (which == SmallCase::two_trits) {
        push({{0, 1, 1}, {0, 0, 2}});
        push({{f1, 1, 1}, {-f0, 0, 2}});
        push({{f1, 0, 1}, {-f0, 1, 2}});
        push({{f1, 0, 1}, {-f0, 0, 0}});
    } else {
        const long long f2 = f(2);
        push({{0, 1, 1}, {0, 0, 2}, {0, 0, 1}});
        push({{f1, 1, 1}, {-f0, 0, 2}, {-2 * f0, 0, 1}});
        push({{f1, 2, 1}, {-f0, 1, 2}, {-2 * f0, 1, 1}});
        push({{f1, 2, 2}, {-f0, 2, 1}, {-2 * f0, 1, 2}});
        push({{f1 + 2 * f2, 2, 2}, {-f0 + f2, 2, 1}, {-2 * f0 + 2 * f1, 1, 2}});
        push({{f1 + 2 * f2, 0, 2}, {-f0 + f2, 0, 1}, {-2 * f0 + 2 * f1, 2, 2}});
        push({{f1 + 2 * f2, 0, 2}, {-f0 + f2, 0, 1}, {-2 * f0 + 2 * f1, 0, 0}});
    }
    return steps;
}

VerificationReport check_suite(const GridSpec& grid) {
    if (grid.max_n < 1) throw std::invalid_argument("check_suite: max_n must be >= 1");
    if (grid.max_k < 2) throw std::invalid_argument("check_suite: max_k must be >= 2");
    if (!(grid.tolerance >= 0))
        throw std::invalid_argument("check_suite: tolerance must be >= 0");
    table_count(grid.max_n, grid.max_k, grid.oracle_cap);  // largest cell must fit

    VerificationReport report{grid, {}, 0, 0};
    Recorder rec{report.checks};
    const double tol = grid.tolerance;
    const double tight = std::min(grid.tolerance, 1e-12);

    check_operators(grid, tight, rec);
    check_estimator(grid, tight, rec);
    check_traces(grid, tol, tight, rec);
    check_phase_split(grid, tight, rec);
    check_sum_grid(grid, tol, rec);
    check_reads(grid, rec);
    check_curves(grid, rec);

    for (const CheckResult& c : report.checks)
        ++(c.pass ? report.passed : report.failed);
    return report;
}

std::string report_json(const VerificationReport& report) {
    nlohmann::ordered_json j;
    j["grid"] = {{"max_n", report.grid.max_n},
                 {"max_k", report.grid.max_k},
                 {"tolerance", report.grid.tolerance},
                 {"oracle_cap", report.grid.oracle_cap}};
    j["checks"] = nlohmann::ordered_json::array();
    for (const CheckResult& c : report.checks)
        j["checks"].push_back({{"name", c.name},
                               {"instance", c.instance},
                               {"expected", c.expected},
                               {"observed", c.observed},
                               {"pass", c.pass}});
    j["passed"] = report.passed;
    j["failed"] = report.failed;
    j["all_pass"] = report.all_pass();
    return j.dump(2);
}

}  // namespace qsum
