#include "qsum/state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qsum {

namespace {

constexpr double norm_guard = 1e-9;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void require_finite(const std::vector<cx>& amps) {
    for (const cx& a : amps)
        require(std::isfinite(a.real()) && std::isfinite(a.imag()),
                "amplitude is not finite");
}

double norm_sq(const std::vector<cx>& amps) {
    double s = 0.0;
    for (const cx& a : amps) s += std::norm(a);
    return s;
}

void require_unit(const std::vector<cx>& amps) {
    require(std::abs(norm_sq(amps) - 1.0) <= norm_guard,
            "state does not have unit norm");
}

}  // namespace

cx root_of_unity(std::size_t k, long long exponent) {
    require(k >= 1, "root_of_unity: k must be >= 1");
    long long m = exponent % static_cast<long long>(k);
    if (m < 0) m += static_cast<long long>(k);
    const auto um = static_cast<std::size_t>(m);
    // quarter turns exactly, everything else via polar
    if (um == 0) return {1.0, 0.0};
    if (2 * um == k) return {-1.0, 0.0};
    if (4 * um == k) return {0.0, 1.0};
    if (4 * um == 3 * k) return {0.0, -1.0};
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(um) / static_cast<double>(k);
    return std::polar(1.0, angle);
}

std::size_t ring_distance(std::size_t a, std::size_t b, std::size_t k) {
    require(k >= 1 && a < k && b < k, "ring_distance: residues out of range");
    const std::size_t d = a >= b ? a - b : b - a;
    return std::min(d, k - d);
}

StateVector::StateVector(std::vector<cx> amps) : amps_(std::move(amps)) {
    require(!amps_.empty(), "StateVector: empty amplitude vector");
    require_finite(amps_);
    require_unit(amps_);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::out_of_range("StateVector::basis: index >= dim");
    std::vector<cx> amps(dim, cx{0.0, 0.0});
    amps[index] = cx{1.0, 0.0};
    return StateVector(std::move(amps));
}

JointState::JointState(std::size_t n, std::size_t k, std::vector<cx> amps)
    : n_(n), k_(k), amps_(std::move(amps)) {
    require(n_ >= 1, "JointState: n must be >= 1");
    require(k_ >= 2, "JointState: k must be >= 2");
    require(amps_.size() == n_ * k_, "JointState: amplitude count != n*k");
    require_finite(amps_);
    require_unit(amps_);
}

JointState JointState::basis(std::size_t n, std::size_t k, std::size_t x,
                             std::size_t y) {
    require(n >= 1 && k >= 2, "JointState::basis: need n >= 1, k >= 2");
    if (x >= n || y >= k) throw std::out_of_range("JointState::basis: index out of range");
    std::vector<cx> amps(n * k, cx{0.0, 0.0});
    amps[x * k + y] = cx{1.0, 0.0};
    return JointState(n, k, std::move(amps));
}

const cx& JointState::at(std::size_t x, std::size_t y) const {
    if (x >= n_ || y >= k_) throw std::out_of_range("JointState::at: index out of range");
    return amps_[x * k_ + y];
}

double JointState::position_prob(std::size_t x) const {
    if (x >= n_) throw std::out_of_range("JointState::position_prob: x >= n");
    double p = 0.0;
    for (std::size_t y = 0; y < k_; ++y) p += std::norm(amps_[x * k_ + y]);
    return p;
}

std::vector<cx> JointState::value_slice(std::size_t x) const {
    if (x >= n_) throw std::out_of_range("JointState::value_slice: x >= n");
    return {amps_.begin() + static_cast<std::ptrdiff_t>(x * k_),
            amps_.begin() + static_cast<std::ptrdiff_t>((x + 1) * k_)};
}

OutcomeDistribution::OutcomeDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
    require(probs_.size() >= 2, "OutcomeDistribution: need k >= 2 outcomes");
    double total = 0.0;
    for (double p : probs_) {
        require(std::isfinite(p), "OutcomeDistribution: probability not finite");
        require(p >= -norm_guard && p <= 1.0 + norm_guard,
                "OutcomeDistribution: probability outside [0,1]");
        total += p;
    }
    require(std::abs(total - 1.0) <= norm_guard,
            "OutcomeDistribution: probabilities do not sum to 1");
}

double OutcomeDistribution::operator[](std::size_t y) const {
    if (y >= probs_.size()) throw std::out_of_range("OutcomeDistribution: y >= k");
    return probs_[y];
}

double OutcomeDistribution::mass_within(std::size_t center,
                                        std::size_t radius) const {
    const std::size_t kk = probs_.size();
    if (center >= kk) throw std::out_of_range("OutcomeDistribution: center >= k");
    double m = 0.0;
    for (std::size_t y = 0; y < kk; ++y)
        if (ring_distance(y, center, kk) <= radius) m += probs_[y];
    return m;
}

std::size_t OutcomeDistribution::sample(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double acc = 0.0;
    for (std::size_t y = 0; y + 1 < probs_.size(); ++y) {
        acc += probs_[y];
        if (u < acc) return y;
    }
    return probs_.size() - 1;
}

StateVector fourier_state(std::size_t k, std::size_t a) {
    require(k >= 2, "fourier_state: k must be >= 2");
    require(a < k, "fourier_state: a must be in [0, k)");
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    std::vector<cx> amps(k);
    for (std::size_t l = 0; l < k; ++l)
        amps[l] = scale * root_of_unity(k, -static_cast<long long>(a * l));
    return StateVector(std::move(amps));
}

OutcomeDistribution measure_second_register(const JointState& state) {
    std::vector<double> probs(state.k(), 0.0);
    for (std::size_t x = 0; x < state.n(); ++x)
        for (std::size_t y = 0; y < state.k(); ++y)
            probs[y] += std::norm(state.at(x, y));
    return OutcomeDistribution(std::move(probs));
}

bool phase_equal(const std::vector<cx>& u, const std::vector<cx>& v, double tol) {
    require(u.size() == v.size(), "phase_equal: dimension mismatch");
    require(tol >= 0.0, "phase_equal: tol must be >= 0");
    cx inner{0.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i) inner += std::conj(v[i]) * u[i];
    const double mag = std::abs(inner);
    const cx phase = mag > 0.0 ? inner / mag : cx{1.0, 0.0};
    for (std::size_t i = 0; i < u.size(); ++i)
        if (std::abs(u[i] - phase * v[i]) > tol) return false;
    return true;
}

bool phase_equal(const StateVector& u, const StateVector& v, double tol) {
    return phase_equal(u.amps(), v.amps(), tol);
}

bool phase_equal(const JointState& u, const JointState& v, double tol) {
    require(u.n() == v.n() && u.k() == v.k(), "phase_equal: dimension mismatch");
    return phase_equal(u.amps(), v.amps(), tol);
}

}  // namespace qsum
