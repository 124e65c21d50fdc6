#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alkit/types.hpp"

namespace alkit {

// Unscrambled Sobol' sequence in up to 50 dimensions, Gray-code order, with
// the Joe-Kuo direction numbers compiled into the library. Index 0 is the
// origin, so callers that dislike an exact corner point skip at least one
// index. 32 bits of resolution per coordinate.
class SobolSequence {
  public:
    explicit SobolSequence(int d);

    static int max_dimension();

    int dim() const { return d_; }
    std::uint64_t index() const { return index_; }

    // Jump so that the next point returned is the one at `index`; O(d).
    void seek(std::uint64_t index);

    // Discard `count` points.
    void skip(std::uint64_t count) { seek(index_ + count); }

    // Return the point at the current index and advance.
    Vector next();

    // n x d matrix of consecutive points.
    Matrix take(int n);

  private:
    int d_ = 0;
    std::uint64_t index_ = 0;
    std::vector<std::uint32_t> state_;      // current point, d words
    std::vector<std::uint32_t> direction_;  // d x 32, row-major
};

namespace detail {
// Parses a "d s a m_1 .. m_s" direction-number table; exposed for tests that
// load an alternate table from disk.
std::vector<std::vector<std::uint32_t>> parse_direction_table(
    const std::string& text, int max_dim);
}  // namespace detail

}  // namespace alkit
