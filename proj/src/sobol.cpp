#include "alkit/sobol.hpp"

#include <bit>
#include <sstream>

#include "alkit/embedded_data.hpp"

namespace alkit {

namespace {

constexpr int kBits = 32;
constexpr int kMaxDim = 50;

// direction[(dim-1) * kBits + j] = V_{j+1} for that dimension, j = 0..31.
const std::vector<std::uint32_t>& direction_table() {
    static const std::vector<std::uint32_t> table = [] {
        auto rows = detail::parse_direction_table(embedded::kSobolDirections, kMaxDim);
        std::vector<std::uint32_t> flat(static_cast<std::size_t>(kMaxDim) * kBits, 0);
        for (int dim = 1; dim <= kMaxDim; ++dim) {
            const auto& v = rows[static_cast<std::size_t>(dim - 1)];
            for (int j = 0; j < kBits; ++j) {
                flat[static_cast<std::size_t>(dim - 1) * kBits + j] = v[j];
            }
        }
        return flat;
    }();
    return table;
}

}  // namespace

namespace detail {

std::vector<std::vector<std::uint32_t>> parse_direction_table(const std::string& text,
                                                              int max_dim) {
    std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(max_dim));

    // Dimension 1 is van der Corput: V_k = 2^(32-k).
    rows[0].assign(kBits, 0);
    for (int j = 0; j < kBits; ++j) rows[0][j] = 1u << (kBits - 1 - j);

    std::istringstream in(text);
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!saw_header) {
            saw_header = true;  // "d s a m_i"
            continue;
        }
        std::istringstream ls(line);
        int dim = 0, s = 0;
        std::uint32_t a = 0;
        if (!(ls >> dim >> s >> a)) {
            throw ValidationError("direction table: malformed line '" + line + "'");
        }
        if (dim < 2 || dim > max_dim) continue;
        if (s < 1 || s > kBits) {
            throw ValidationError("direction table: bad polynomial degree");
        }
        std::vector<std::uint32_t> m(static_cast<std::size_t>(s));
        for (int k = 0; k < s; ++k) {
            if (!(ls >> m[k])) {
                throw ValidationError("direction table: missing m values for dim " +
                                      std::to_string(dim));
            }
            if (m[k] % 2 == 0 || m[k] >= (1u << (k + 1))) {
                throw ValidationError("direction table: invalid m value for dim " +
                                      std::to_string(dim));
            }
        }
        // V_j = m_j * 2^(32-j) for j <= s, then the Joe-Kuo recurrence.
        std::vector<std::uint32_t> v(kBits);
        for (int j = 0; j < s && j < kBits; ++j) {
            v[j] = m[static_cast<std::size_t>(j)] << (kBits - 1 - j);
        }
        for (int j = s; j < kBits; ++j) {
            std::uint32_t val = v[j - s] ^ (v[j - s] >> s);
            for (int k = 1; k < s; ++k) {
                if ((a >> (s - 1 - k)) & 1u) val ^= v[j - k];
            }
            v[j] = val;
        }
        rows[static_cast<std::size_t>(dim - 1)] = std::move(v);
    }
    for (int dim = 2; dim <= max_dim; ++dim) {
        if (rows[static_cast<std::size_t>(dim - 1)].empty()) {
            throw ValidationError("direction table: missing dimension " +
                                  std::to_string(dim));
        }
    }
    return rows;
}

}  // namespace detail

int SobolSequence::max_dimension() { return kMaxDim; }

SobolSequence::SobolSequence(int d) : d_(d) {
    if (d < 1 || d > kMaxDim) {
        throw ValidationError("Sobol' dimension must be in [1, " +
                              std::to_string(kMaxDim) + "], got " + std::to_string(d));
    }
    const auto& table = direction_table();
    direction_.assign(table.begin(),
                      table.begin() + static_cast<std::size_t>(d) * kBits);
    state_.assign(static_cast<std::size_t>(d), 0);
}

void SobolSequence::seek(std::uint64_t index) {
    // The point at `index` XORs the direction numbers selected by the bits of
    // gray(index); 64-bit indices beyond 2^32 wrap the 32-bit state, so cap.
    if (index >= (1ULL << kBits)) {
        throw ValidationError("Sobol' index exceeds 32-bit resolution");
    }
    const std::uint32_t gray =
        static_cast<std::uint32_t>(index ^ (index >> 1));
    for (int dim = 0; dim < d_; ++dim) {
        std::uint32_t x = 0;
        for (int j = 0; j < kBits; ++j) {
            if ((gray >> j) & 1u) x ^= direction_[static_cast<std::size_t>(dim) * kBits + j];
        }
        state_[static_cast<std::size_t>(dim)] = x;
    }
    index_ = index;
}

Vector SobolSequence::next() {
    Vector p(d_);
    for (int dim = 0; dim < d_; ++dim) {
        p[dim] = static_cast<double>(state_[static_cast<std::size_t>(dim)]) * 0x1.0p-32;
    }
    // Advance with the Gray-code rule: flip the direction number indexed by
    // the lowest zero bit of the current index.
    const int c = std::countr_one(static_cast<std::uint32_t>(index_));
    if (c < kBits) {
        for (int dim = 0; dim < d_; ++dim) {
            state_[static_cast<std::size_t>(dim)] ^=
                direction_[static_cast<std::size_t>(dim) * kBits + c];
        }
    }
    ++index_;
    return p;
}

Matrix SobolSequence::take(int n) {
    if (n < 0) throw ValidationError("Sobol' take: n must be non-negative");
    Matrix out(n, d_);
    for (int i = 0; i < n; ++i) out.row(i) = next();
    return out;
}

}  // namespace alkit
