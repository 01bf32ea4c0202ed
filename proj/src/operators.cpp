#include "qsum/operators.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qsum {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

UnitaryOp::UnitaryOp(std::size_t dim, std::vector<cx> entries)
    : dim_(dim), entries_(std::move(entries)) {
    require(dim_ >= 1, "UnitaryOp: dim must be >= 1");
    require(entries_.size() == dim_ * dim_, "UnitaryOp: entry count != dim^2");
    for (const cx& e : entries_)
        require(std::isfinite(e.real()) && std::isfinite(e.imag()),
                "UnitaryOp: entry is not finite");
}

UnitaryOp UnitaryOp::identity(std::size_t dim) {
    require(dim >= 1, "UnitaryOp::identity: dim must be >= 1");
    std::vector<cx> e(dim * dim, cx{0, 0});
    for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = cx{1, 0};
    return UnitaryOp(dim, std::move(e));
}

const cx& UnitaryOp::at(std::size_t row, std::size_t col) const {
    if (row >= dim_ || col >= dim_)
        throw std::out_of_range("UnitaryOp::at: index out of range");
    return entries_[row * dim_ + col];
}

std::vector<cx> UnitaryOp::apply(const std::vector<cx>& v) const {
    require(v.size() == dim_, "UnitaryOp::apply: dimension mismatch");
    std::vector<cx> out(dim_, cx{0, 0});
    for (std::size_t r = 0; r < dim_; ++r) {
        cx acc{0, 0};
        const cx* row = entries_.data() + r * dim_;
        for (std::size_t c = 0; c < dim_; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

StateVector UnitaryOp::apply(const StateVector& s) const {
    return StateVector(apply(s.amps()));
}

JointState UnitaryOp::apply(const JointState& s) const {
    require(s.dim() == dim_, "UnitaryOp::apply: dimension mismatch");
    return JointState(s.n(), s.k(), apply(s.amps()));
}

UnitaryOp UnitaryOp::operator*(const UnitaryOp& rhs) const {
    require(dim_ == rhs.dim_, "UnitaryOp: product dimension mismatch");
    std::vector<cx> out(dim_ * dim_, cx{0, 0});
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t m = 0; m < dim_; ++m) {
            const cx a = entries_[r * dim_ + m];
            if (a == cx{0, 0}) continue;
            const cx* rrow = rhs.entries_.data() + m * dim_;
            cx* orow = out.data() + r * dim_;
            for (std::size_t c = 0; c < dim_; ++c) orow[c] += a * rrow[c];
        }
    return UnitaryOp(dim_, std::move(out));
}

UnitaryOp UnitaryOp::adjoint() const {
    std::vector<cx> out(dim_ * dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c)
            out[c * dim_ + r] = std::conj(entries_[r * dim_ + c]);
    return UnitaryOp(dim_, std::move(out));
}

double UnitaryOp::unitarity_gap() const {
    double gap = 0.0;
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            cx acc{0, 0};
            for (std::size_t m = 0; m < dim_; ++m)
                acc += std::conj(entries_[m * dim_ + i]) * entries_[m * dim_ + j];
            if (i == j) acc -= cx{1, 0};
            gap = std::max(gap, std::abs(acc));
        }
    return gap;
}

UnitaryOp tensor(const UnitaryOp& a, const UnitaryOp& b) {
    const std::size_t da = a.dim(), db = b.dim(), dim = da * db;
    std::vector<cx> out(dim * dim, cx{0, 0});
    for (std::size_t ra = 0; ra < da; ++ra)
        for (std::size_t ca = 0; ca < da; ++ca) {
            const cx va = a.at(ra, ca);
            if (va == cx{0, 0}) continue;
            for (std::size_t rb = 0; rb < db; ++rb)
                for (std::size_t cb = 0; cb < db; ++cb)
                    out[(ra * db + rb) * dim + (ca * db + cb)] = va * b.at(rb, cb);
        }
    return UnitaryOp(dim, std::move(out));
}

FunctionTable::FunctionTable(std::size_t k, std::vector<unsigned> values)
    : k_(k), values_(std::move(values)) {
    require(k_ >= 2, "FunctionTable: k must be >= 2");
    require(!values_.empty(), "FunctionTable: need at least one value");
    for (unsigned v : values_)
        require(v < k_, "FunctionTable: value out of range [0, k)");
}

unsigned FunctionTable::operator()(std::size_t x) const {
    if (x >= values_.size()) throw std::out_of_range("FunctionTable: x >= n");
    return values_[x];
}

unsigned FunctionTable::sum() const {
    std::size_t s = 0;
    for (unsigned v : values_) s += v;
    return static_cast<unsigned>(s % k_);
}

FunctionTable FunctionTable::slice(std::size_t offset, std::size_t length) const {
    require(length >= 1, "FunctionTable::slice: empty slice");
    require(offset + length <= values_.size(), "FunctionTable::slice: out of range");
    return FunctionTable(
        k_, std::vector<unsigned>(values_.begin() + static_cast<std::ptrdiff_t>(offset),
                                  values_.begin() + static_cast<std::ptrdiff_t>(offset + length)));
}

UnitaryOp shift_op(std::size_t d) {
    require(d >= 1, "shift_op: d must be >= 1");
    std::vector<cx> e(d * d, cx{0, 0});
    for (std::size_t z = 0; z < d; ++z) e[((z + 1) % d) * d + z] = cx{1, 0};
    return UnitaryOp(d, std::move(e));
}

UnitaryOp fourier_op(std::size_t k) {
    require(k >= 2, "fourier_op: k must be >= 2");
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    std::vector<cx> e(k * k);
    for (std::size_t l = 0; l < k; ++l)
        for (std::size_t y = 0; y < k; ++y)
            e[l * k + y] = scale * root_of_unity(k, static_cast<long long>(l * y));
    return UnitaryOp(k, std::move(e));
}

UnitaryOp oracle_op(const FunctionTable& f) {
    const std::size_t n = f.n(), k = f.k(), dim = n * k;
    std::vector<cx> e(dim * dim, cx{0, 0});
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < k; ++y)
            e[(x * k + (y + f(x)) % k) * dim + (x * k + y)] = cx{1, 0};
    return UnitaryOp(dim, std::move(e));
}

namespace {

// (I ⊗ W) P (I ⊗ W)† where P permutes computational pairs (x, a) ↦ perm(x, a)
// and W's column a is |ω^a⟩. Built column-block-wise: the image of the mixed
// basis vector |x⟩|ω^a⟩ is |x'⟩|ω^{a'}⟩, i.e. the matrix is
// Σ (|x'⟩W e_{a'}) (|x⟩W e_a)†.
template <typename Perm>
UnitaryOp mixed_basis_permutation(std::size_t n, std::size_t k, Perm perm) {
    const std::size_t dim = n * k;
    std::vector<std::vector<cx>> w(k);
    for (std::size_t a = 0; a < k; ++a) w[a] = fourier_state(k, a).amps();
    std::vector<cx> e(dim * dim, cx{0, 0});
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < k; ++a) {
            const auto [xp, ap] = perm(x, a);
            const std::vector<cx>& src = w[a];
            const std::vector<cx>& dst = w[ap];
            for (std::size_t l = 0; l < k; ++l) {
                if (dst[l] == cx{0, 0}) continue;
                for (std::size_t m = 0; m < k; ++m)
                    e[(xp * k + l) * dim + (x * k + m)] += dst[l] * std::conj(src[m]);
            }
        }
    return UnitaryOp(dim, std::move(e));
}

}  // namespace

UnitaryOp gather_op(std::size_t n, std::size_t k, std::size_t step) {
    require(n >= 1, "gather_op: n must be >= 1");
    require(k >= 2, "gather_op: k must be >= 2");
    const std::size_t slot = (n - step % n) % n;
    return mixed_basis_permutation(
        n, k, [&](std::size_t x, std::size_t a) -> std::pair<std::size_t, std::size_t> {
            if (x == slot && a == k - 1) return {0, 0};
            if (x == 0 && a == 0) return {slot, k - 1};
            return {x, a};
        });
}

UnitaryOp relay_op(std::size_t n, std::size_t k, std::size_t step) {
    require(n >= 1, "relay_op: n must be >= 1");
    require(k >= 2, "relay_op: k must be >= 2");
    const std::size_t hop = step % n;
    return mixed_basis_permutation(
        n, k, [&](std::size_t x, std::size_t a) -> std::pair<std::size_t, std::size_t> {
            if (a == 0) return {x, 0};
            if (a == k - 1) return {(x + hop) % n, 1};
            return {x, a + 1};
        });
}

}  // namespace qsum
