#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "alkit/types.hpp"

namespace alkit {

enum class DesignGenerator { Mofat, Ofat, MaximinLhd, MaxPro, Sobol, Random, Imported };

std::string to_string(DesignGenerator g);
DesignGenerator design_generator_from_string(const std::string& name);

// One one-factor-at-a-time block: a base point plus, for every coordinate, a
// copy of the base with that single coordinate replaced by the partner's.
// Base and partner must differ in every coordinate, otherwise a block row
// would duplicate its base.
struct OfatBlock {
    Vector base;
    Vector partner;
};

// Row indices of an expanded block inside the design matrix.
struct OfatBlockRows {
    int base_row = 0;
    std::vector<int> factor_rows;  // factor_rows[k] changes coordinate k
};

struct DesignMatrix {
    Matrix points;  // n x d, all entries in [0, 1]
    DesignGenerator generator = DesignGenerator::Imported;
    std::optional<std::uint64_t> seed;
    std::optional<int> l;               // block count for OFAT-style designs
    std::vector<OfatBlockRows> blocks;  // empty unless OFAT-structured

    int n() const { return static_cast<int>(points.rows()); }
    int d() const { return static_cast<int>(points.cols()); }
};

// Expands blocks into an l*(d+1)-row design, block-major: base row first,
// then the d one-coordinate changes in coordinate order.
DesignMatrix ofat_design(const std::vector<OfatBlock>& blocks);

// Throws ValidationError unless the design's block metadata is consistent
// with its rows: each non-base row differs from its base in exactly the
// declared coordinate and matches it in all others.
void validate_ofat_structure(const DesignMatrix& design);

// Space-filling OFAT assembly: picks l (base, partner) pairs on the grid
// {(2i-1)/(2g) : i = 1..g}, g = 2l, to maximize the minimum pairwise
// Euclidean distance among all l*(d+1) expanded rows. Seeded random restarts
// followed by coordinate-exchange hill climbing; `iters` proposals total.
DesignMatrix mofat_heuristic(int d, int l, std::uint64_t seed, int iters = 5000);

// Latin hypercube on cell midpoints {(2i-1)/(2n)}, optimized by simulated
// annealing over LHD-preserving single-column row-pair swaps. maximin_lhd
// maximizes the minimum pairwise Euclidean distance; maxpro_design minimizes
// sum_{i<j} 1 / prod_k (x_ik - x_jk)^2. Both return the best design seen.
DesignMatrix maximin_lhd(int n, int d, std::uint64_t seed, int iters = 10000);
DesignMatrix maxpro_design(int n, int d, std::uint64_t seed, int iters = 10000);

// First n points of the d-dimensional Sobol' sequence after dropping `skip`
// points. The default skip = 1 drops the origin.
DesignMatrix sobol_points(int n, int d, int skip = 1);

// n i.i.d. uniform points.
DesignMatrix random_design(int n, int d, std::uint64_t seed);

double min_pairwise_distance(const Matrix& points);
double maxpro_criterion(const Matrix& points);

// CSV with header x1..xd plus a sibling `<path>.meta` key=value file carrying
// generator, seed and block structure so a reloaded design round-trips.
void write_design_csv(const DesignMatrix& design, const std::string& path);
DesignMatrix read_design_csv(const std::string& path);

}  // namespace alkit
