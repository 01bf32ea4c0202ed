#include "qsum/analysis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsum {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::string fraction_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return static_cast<double>(r); }

StateVector estimator_state(std::size_t k, std::size_t s, std::size_t a) {
    require(k >= 2, "estimator_state: k must be >= 2");
    require(s >= 1 && s <= k, "estimator_state: need 1 <= s <= k");
    require(a < k, "estimator_state: a must be in [0, k)");
    const double scale = 1.0 / std::sqrt(static_cast<double>(s));
    std::vector<cx> amps(k, cx{0, 0});
    for (std::size_t l = 1; l <= s; ++l) {
        const cx coeff =
            scale * root_of_unity(k, -static_cast<long long>(l) * static_cast<long long>(a));
        const StateVector comp = fourier_state(k, s - l);
        for (std::size_t m = 0; m < k; ++m) amps[m] += coeff * comp[m];
    }
    return StateVector(std::move(amps));
}

double estimator_prob(std::size_t k, std::size_t s, std::size_t a, std::size_t y) {
    require(k >= 2, "estimator_prob: k must be >= 2");
    require(s >= 1 && s <= k, "estimator_prob: need 1 <= s <= k");
    require(a < k && y < k, "estimator_prob: residues out of range");
    const long long d = (static_cast<long long>(y) - static_cast<long long>(a)) %
                        static_cast<long long>(k);
    if (d == 0) return static_cast<double>(s) / static_cast<double>(k);
    const double x = std::numbers::pi * static_cast<double>(d) / static_cast<double>(k);
    const double ratio = std::sin(static_cast<double>(s) * x) / std::sin(x);
    return ratio * ratio / (static_cast<double>(s) * static_cast<double>(k));
}

double central_mass(std::size_t k, std::size_t s) {
    require(k >= 2, "central_mass: k must be >= 2");
    require(s >= 1 && s <= k, "central_mass: need 1 <= s <= k");
    const std::size_t radius = k / (2 * s);
    double mass = 0.0;
    for (std::size_t y = 0; y < k; ++y)
        if (ring_distance(y, 0, k) <= radius) mass += estimator_prob(k, s, 0, y);
    return mass;
}

double block_phase_gap(const FunctionTable& f, std::size_t r) {
    const std::size_t n = f.n(), k = f.k();
    require(r >= 1 && r <= n, "block_phase_gap: need 1 <= r <= n");
    require(n % r == 0, "block_phase_gap: r must divide n");
    const std::size_t s = n / r;
    require(s <= k, "block_phase_gap: need n/r <= k");

    std::vector<long long> block(s + 1, 0);  // block[m] = B_m, 1-based
    for (std::size_t m = 1; m <= s; ++m)
        for (std::size_t x = (m - 1) * r; x < m * r; ++x) block[m] += f(x);
    long long weighted = 0, total = 0;
    for (std::size_t m = 1; m <= s; ++m) {
        weighted += static_cast<long long>(m) * block[m];
        total += block[m];
    }

    const double scale = 1.0 / std::sqrt(static_cast<double>(s));
    std::vector<cx> lhs(k, cx{0, 0}), rhs(k, cx{0, 0});
    const cx global = root_of_unity(k, weighted);
    for (std::size_t l = 1; l <= s; ++l) {
        const StateVector comp = fourier_state(k, s - l);
        const cx cl = global * scale * root_of_unity(k, -static_cast<long long>(l) * total);
        long long shear = 0;
        for (std::size_t m = 1; m <= s; ++m)
            shear += (static_cast<long long>(m) - static_cast<long long>(l)) * block[m];
        const cx cr = scale * root_of_unity(k, shear);
        for (std::size_t m = 0; m < k; ++m) {
            lhs[m] += cl * comp[m];
            rhs[m] += cr * comp[m];
        }
    }
    double gap = 0.0;
    for (std::size_t m = 0; m < k; ++m) gap = std::max(gap, std::abs(lhs[m] - rhs[m]));
    return gap;
}

Rational success_probability(std::size_t n, std::size_t k, std::size_t r) {
    require(n >= 1, "success_probability: n must be >= 1");
    require(k >= 2, "success_probability: k must be >= 2");
    require(r >= 1 && r <= n, "success_probability: need 1 <= r <= n");
    const std::size_t s = n / r;
    if (s >= k) return Rational(1);
    return Rational(s, k);
}

Rational vandam_identify_prob(std::size_t n, std::size_t k, std::size_t q) {
    require(n >= 1, "vandam_identify_prob: n must be >= 1");
    require(k >= 2, "vandam_identify_prob: k must be >= 2");
    require(q <= n, "vandam_identify_prob: need q <= n");
    BigInt num = 0;
    BigInt binom = 1;   // C(n, j)
    BigInt power = 1;   // (k−1)^j
    for (std::size_t j = 0; j <= q; ++j) {
        if (j > 0) {
            binom = binom * static_cast<unsigned long long>(n - j + 1) /
                    static_cast<unsigned long long>(j);
            power *= static_cast<unsigned long long>(k - 1);
        }
        num += binom * power;
    }
    BigInt den = 1;
    for (std::size_t i = 0; i < n; ++i) den *= static_cast<unsigned long long>(k);
    return Rational(num, den);
}

Rational vandam_sum_bound(std::size_t n, std::size_t k, std::size_t q) {
    const Rational p = vandam_identify_prob(n, k, q);
    return p + (Rational(1) - p) / Rational(static_cast<unsigned long long>(k));
}

SweepCurves sweep_curves(std::size_t n, std::size_t k) {
    require(n >= 1, "sweep_curves: n must be >= 1");
    require(k >= 2, "sweep_curves: k must be >= 2");
    SweepCurves out{{n, k, {}}, {n, k, {}}};
    for (std::size_t q = 0; q <= n; ++q) {
        const Rational step = q < n ? success_probability(n, k, n - q) : Rational(1);
        out.success.points.push_back({q, step});
        out.bound.points.push_back({q, vandam_sum_bound(n, k, q)});
    }
    return out;
}

}  // namespace qsum
