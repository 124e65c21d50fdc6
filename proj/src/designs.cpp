#include "alkit/designs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "alkit/numeric.hpp"
#include "alkit/sobol.hpp"

namespace alkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void check_nd(int n, int d, const char* who) {
    if (n < 1) throw ValidationError(std::string(who) + ": n must be >= 1");
    if (d < 1) throw ValidationError(std::string(who) + ": d must be >= 1");
}

}  // namespace

std::string to_string(DesignGenerator g) {
    switch (g) {
        case DesignGenerator::Mofat: return "mofat";
        case DesignGenerator::Ofat: return "ofat";
        case DesignGenerator::MaximinLhd: return "maximin_lhd";
        case DesignGenerator::MaxPro: return "maxpro";
        case DesignGenerator::Sobol: return "sobol";
        case DesignGenerator::Random: return "random";
        case DesignGenerator::Imported: return "imported";
    }
    throw ValidationError("unknown design generator enum value");
}

DesignGenerator design_generator_from_string(const std::string& name) {
    if (name == "mofat") return DesignGenerator::Mofat;
    if (name == "ofat") return DesignGenerator::Ofat;
    if (name == "maximin_lhd" || name == "maximin-lhd") return DesignGenerator::MaximinLhd;
    if (name == "maxpro") return DesignGenerator::MaxPro;
    if (name == "sobol") return DesignGenerator::Sobol;
    if (name == "random") return DesignGenerator::Random;
    if (name == "imported") return DesignGenerator::Imported;
    throw ValidationError("unknown design generator '" + name + "'");
}

DesignMatrix ofat_design(const std::vector<OfatBlock>& blocks) {
    if (blocks.empty()) throw ValidationError("ofat_design: need at least one block");
    const int d = static_cast<int>(blocks.front().base.size());
    if (d < 1) throw ValidationError("ofat_design: blocks must have dimension >= 1");
    const int l = static_cast<int>(blocks.size());

    DesignMatrix design;
    design.points.resize(l * (d + 1), d);
    design.generator = DesignGenerator::Ofat;
    design.l = l;
    int row = 0;
    for (int b = 0; b < l; ++b) {
        const OfatBlock& blk = blocks[static_cast<std::size_t>(b)];
        if (blk.base.size() != d || blk.partner.size() != d) {
            throw DimensionMismatch("ofat_design: inconsistent block dimensions");
        }
        for (int k = 0; k < d; ++k) {
            if (!(blk.base[k] >= 0.0 && blk.base[k] <= 1.0) ||
                !(blk.partner[k] >= 0.0 && blk.partner[k] <= 1.0)) {
                throw ValidationError("ofat_design: block coordinates must be in [0, 1]");
            }
            if (blk.base[k] == blk.partner[k]) {
                std::ostringstream msg;
                msg << "ofat_design: block " << b + 1 << " base and partner agree in "
                    << "coordinate " << k + 1 << "; every factor row must change";
                throw ValidationError(msg.str());
            }
        }
        OfatBlockRows rows;
        rows.base_row = row;
        design.points.row(row++) = blk.base;
        rows.factor_rows.resize(static_cast<std::size_t>(d));
        for (int k = 0; k < d; ++k) {
            Vector p = blk.base;
            p[k] = blk.partner[k];
            rows.factor_rows[static_cast<std::size_t>(k)] = row;
            design.points.row(row++) = p;
        }
        design.blocks.push_back(std::move(rows));
    }
    return design;
}

void validate_ofat_structure(const DesignMatrix& design) {
    const int n = design.n(), d = design.d();
    if (design.blocks.empty()) {
        throw ValidationError("design has no one-factor block metadata");
    }
    const int l = static_cast<int>(design.blocks.size());
    if (n != l * (d + 1)) {
        std::ostringstream msg;
        msg << "one-factor design should have l*(d+1) = " << l * (d + 1)
            << " rows, found " << n;
        throw ValidationError(msg.str());
    }
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    auto claim = [&](int r) {
        if (r < 0 || r >= n) throw ValidationError("block row index out of range");
        if (used[static_cast<std::size_t>(r)]) {
            throw ValidationError("row " + std::to_string(r) + " appears in two blocks");
        }
        used[static_cast<std::size_t>(r)] = true;
    };
    for (int b = 0; b < l; ++b) {
        const auto& rows = design.blocks[static_cast<std::size_t>(b)];
        claim(rows.base_row);
        if (static_cast<int>(rows.factor_rows.size()) != d) {
            throw ValidationError("block " + std::to_string(b + 1) +
                                  " must have one factor row per coordinate");
        }
        for (int k = 0; k < d; ++k) {
            const int r = rows.factor_rows[static_cast<std::size_t>(k)];
            claim(r);
            for (int c = 0; c < d; ++c) {
                const double base_v = design.points(rows.base_row, c);
                const double row_v = design.points(r, c);
                if (c == k && row_v == base_v) {
                    std::ostringstream msg;
                    msg << "block " << b + 1 << ": factor row for coordinate " << k + 1
                        << " does not change it";
                    throw ValidationError(msg.str());
                }
                if (c != k && row_v != base_v) {
                    std::ostringstream msg;
                    msg << "block " << b + 1 << ": factor row for coordinate " << k + 1
                        << " also changes coordinate " << c + 1;
                    throw ValidationError(msg.str());
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Space-filling OFAT assembly.
//
// Blocks are encoded as integer grid-level indices so base != partner checks
// are exact. A proposal changes one level of one block; only the rows that
// contain that level are rebuilt, and the min-distance objective is rescanned
// over the cached pair-distance table. Ties on the minimum break toward fewer
// pairs attaining it, which lets the climb cross plateaus on the grid.
// ---------------------------------------------------------------------------

namespace {

struct MofatState {
    int d = 0, l = 0, g = 0, m = 0;
    std::vector<double> levels;
    std::vector<int> base, partner;  // l*d, level indices
    Matrix rows;                     // m x d expanded points
    std::vector<double> dist2;       // m*m, diagonal +inf

    int idx(int b, int k) const { return b * d + k; }

    void rebuild_row(int r) {
        // row layout: block b occupies rows b*(d+1) .. b*(d+1)+d
        const int b = r / (d + 1);
        const int within = r % (d + 1);
        for (int c = 0; c < d; ++c) rows(r, c) = levels[static_cast<std::size_t>(base[idx(b, c)])];
        if (within > 0) {
            const int k = within - 1;
            rows(r, k) = levels[static_cast<std::size_t>(partner[idx(b, k)])];
        }
    }

    void rebuild_all() {
        for (int r = 0; r < m; ++r) rebuild_row(r);
        for (int i = 0; i < m; ++i) {
            dist2[static_cast<std::size_t>(i) * m + i] = kInf;
            for (int j = i + 1; j < m; ++j) {
                const double v = (rows.row(i) - rows.row(j)).squaredNorm();
                dist2[static_cast<std::size_t>(i) * m + j] = v;
                dist2[static_cast<std::size_t>(j) * m + i] = v;
            }
        }
    }

    void refresh_distances(const std::vector<int>& touched) {
        for (int r : touched) {
            for (int o = 0; o < m; ++o) {
                if (o == r) continue;
                const double v = (rows.row(r) - rows.row(o)).squaredNorm();
                dist2[static_cast<std::size_t>(r) * m + o] = v;
                dist2[static_cast<std::size_t>(o) * m + r] = v;
            }
        }
    }

    std::pair<double, int> objective() const {
        double best = kInf;
        int count = 0;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                const double v = dist2[static_cast<std::size_t>(i) * m + j];
                if (v < best - 1e-12) {
                    best = v;
                    count = 1;
                } else if (v <= best + 1e-12) {
                    ++count;
                }
            }
        }
        return {best, count};
    }
};

bool lex_better(const std::pair<double, int>& a, const std::pair<double, int>& b) {
    if (a.first > b.first + 1e-12) return true;
    if (a.first < b.first - 1e-12) return false;
    return a.second < b.second;
}

}  // namespace

DesignMatrix mofat_heuristic(int d, int l, std::uint64_t seed, int iters) {
    if (d < 1) throw ValidationError("mofat_heuristic: d must be >= 1");
    if (l < 1) throw ValidationError("mofat_heuristic: l must be >= 1");
    if (iters < 0) throw ValidationError("mofat_heuristic: iters must be >= 0");

    MofatState st;
    st.d = d;
    st.l = l;
    st.g = 2 * l;
    st.m = l * (d + 1);
    st.levels.resize(static_cast<std::size_t>(st.g));
    for (int i = 1; i <= st.g; ++i) {
        st.levels[static_cast<std::size_t>(i - 1)] = (2.0 * i - 1.0) / (2.0 * st.g);
    }
    st.base.assign(static_cast<std::size_t>(l * d), 0);
    st.partner.assign(static_cast<std::size_t>(l * d), 0);
    st.rows.resize(st.m, d);
    st.dist2.assign(static_cast<std::size_t>(st.m) * st.m, kInf);

    const int restarts = 4;
    const int per_restart = std::max(iters / restarts, 0);

    std::vector<int> best_base, best_partner;
    std::pair<double, int> best_obj{-kInf, 0};

    for (int rs = 0; rs < restarts; ++rs) {
        Rng rng(hash64(seed, static_cast<std::uint64_t>(rs)));
        for (int b = 0; b < l; ++b) {
            for (int k = 0; k < d; ++k) {
                const int bv = rng.uniform_int(st.g);
                int pv = rng.uniform_int(st.g - 1);
                if (pv >= bv) ++pv;
                st.base[static_cast<std::size_t>(st.idx(b, k))] = bv;
                st.partner[static_cast<std::size_t>(st.idx(b, k))] = pv;
            }
        }
        st.rebuild_all();
        auto cur = st.objective();

        std::vector<int> touched;
        std::vector<double> saved;
        for (int it = 0; it < per_restart; ++it) {
            const int b = rng.uniform_int(l);
            const int k = rng.uniform_int(d);
            const bool change_base = rng.uniform_int(2) == 0;
            auto& mine = change_base ? st.base : st.partner;
            auto& other = change_base ? st.partner : st.base;
            const int old_level = mine[static_cast<std::size_t>(st.idx(b, k))];
            const int forbidden = other[static_cast<std::size_t>(st.idx(b, k))];
            int nv = rng.uniform_int(st.g - 1);
            if (nv >= old_level) ++nv;  // move somewhere else
            if (nv == forbidden) continue;  // would collapse base onto partner

            touched.clear();
            const int first = b * (d + 1);
            if (change_base) {
                // base level in coordinate k shows up in the base row and in
                // every factor row except the one that swaps coordinate k
                for (int w = 0; w <= d; ++w) {
                    if (w == k + 1) continue;
                    touched.push_back(first + w);
                }
            } else {
                touched.push_back(first + k + 1);
            }

            mine[static_cast<std::size_t>(st.idx(b, k))] = nv;
            saved.clear();
            for (int r : touched) {
                for (int o = 0; o < st.m; ++o) {
                    saved.push_back(st.dist2[static_cast<std::size_t>(r) * st.m + o]);
                }
            }
            for (int r : touched) st.rebuild_row(r);
            st.refresh_distances(touched);
            const auto cand = st.objective();
            if (lex_better(cand, cur) || (cand.first == cur.first && cand.second == cur.second)) {
                cur = cand;
            } else {
                mine[static_cast<std::size_t>(st.idx(b, k))] = old_level;
                for (int r : touched) st.rebuild_row(r);
                std::size_t s = 0;
                for (int r : touched) {
                    for (int o = 0; o < st.m; ++o, ++s) {
                        st.dist2[static_cast<std::size_t>(r) * st.m + o] = saved[s];
                        st.dist2[static_cast<std::size_t>(o) * st.m + r] = saved[s];
                    }
                }
            }
        }
        if (best_base.empty() || lex_better(cur, best_obj)) {
            best_obj = cur;
            best_base = st.base;
            best_partner = st.partner;
        }
    }

    std::vector<OfatBlock> blocks(static_cast<std::size_t>(l));
    for (int b = 0; b < l; ++b) {
        OfatBlock& blk = blocks[static_cast<std::size_t>(b)];
        blk.base.resize(d);
        blk.partner.resize(d);
        for (int k = 0; k < d; ++k) {
            blk.base[k] = st.levels[static_cast<std::size_t>(best_base[static_cast<std::size_t>(st.idx(b, k))])];
            blk.partner[k] = st.levels[static_cast<std::size_t>(best_partner[static_cast<std::size_t>(st.idx(b, k))])];
        }
    }
    DesignMatrix design = ofat_design(blocks);
    design.generator = DesignGenerator::Mofat;
    design.seed = seed;
    return design;
}

// ---------------------------------------------------------------------------
// Annealed Latin hypercubes.
// ---------------------------------------------------------------------------

namespace {

Matrix initial_lhd(int n, int d, Rng& rng) {
    Matrix pts(n, d);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
        for (int i = n - 1; i > 0; --i) {
            std::swap(perm[static_cast<std::size_t>(i)],
                      perm[static_cast<std::size_t>(rng.uniform_int(i + 1))]);
        }
        for (int i = 0; i < n; ++i) {
            pts(i, k) = (2.0 * (perm[static_cast<std::size_t>(i)] + 1) - 1.0) / (2.0 * n);
        }
    }
    return pts;
}

// criterion() maps the cached pair table to the scalar objective (larger is
// better); pair_value() fills the table.
struct AnnealSpec {
    std::function<double(const Matrix&, int i, int j)> pair_value;
    std::function<double(const std::vector<double>&, int m)> criterion;
};

Matrix anneal_lhd(int n, int d, std::uint64_t seed, int iters, const AnnealSpec& spec,
                  double* best_out) {
    Rng rng(hash64(seed, 0x1bd));
    Matrix pts = initial_lhd(n, d, rng);
    if (n < 2 || iters <= 0) {
        if (best_out) *best_out = kInf;
        return pts;
    }

    std::vector<double> pair(static_cast<std::size_t>(n) * n, 0.0);
    auto fill_all = [&](const Matrix& p) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double v = spec.pair_value(p, i, j);
                pair[static_cast<std::size_t>(i) * n + j] = v;
                pair[static_cast<std::size_t>(j) * n + i] = v;
            }
        }
    };
    fill_all(pts);
    double cur = spec.criterion(pair, n);
    Matrix best = pts;
    double best_val = cur;

    double temp = 0.1 * std::abs(cur);
    if (!(temp > 0.0) || !std::isfinite(temp)) temp = 1.0;
    std::vector<double> saved(2 * static_cast<std::size_t>(n));

    for (int it = 0; it < iters; ++it) {
        if (it > 0 && it % 100 == 0) temp *= 0.95;
        const int k = rng.uniform_int(d);
        const int i = rng.uniform_int(n);
        int j = rng.uniform_int(n - 1);
        if (j >= i) ++j;
        std::swap(pts(i, k), pts(j, k));
        for (int o = 0; o < n; ++o) {
            saved[static_cast<std::size_t>(o)] = pair[static_cast<std::size_t>(i) * n + o];
            saved[static_cast<std::size_t>(n + o)] = pair[static_cast<std::size_t>(j) * n + o];
        }
        for (int o = 0; o < n; ++o) {
            if (o != i) {
                const double v = spec.pair_value(pts, i, o);
                pair[static_cast<std::size_t>(i) * n + o] = v;
                pair[static_cast<std::size_t>(o) * n + i] = v;
            }
            if (o != j) {
                const double v = spec.pair_value(pts, j, o);
                pair[static_cast<std::size_t>(j) * n + o] = v;
                pair[static_cast<std::size_t>(o) * n + j] = v;
            }
        }
        const double cand = spec.criterion(pair, n);
        const double delta = cand - cur;
        bool accept = delta >= 0.0;
        if (!accept) accept = rng.uniform01() < std::exp(delta / temp);
        if (accept) {
            cur = cand;
            if (cur > best_val) {
                best_val = cur;
                best = pts;
            }
        } else {
            std::swap(pts(i, k), pts(j, k));
            for (int o = 0; o < n; ++o) {
                pair[static_cast<std::size_t>(i) * n + o] = saved[static_cast<std::size_t>(o)];
                pair[static_cast<std::size_t>(o) * n + i] = saved[static_cast<std::size_t>(o)];
                pair[static_cast<std::size_t>(j) * n + o] = saved[static_cast<std::size_t>(n + o)];
                pair[static_cast<std::size_t>(o) * n + j] = saved[static_cast<std::size_t>(n + o)];
            }
        }
    }
    if (best_out) *best_out = best_val;
    return best;
}

}  // namespace

DesignMatrix maximin_lhd(int n, int d, std::uint64_t seed, int iters) {
    check_nd(n, d, "maximin_lhd");
    AnnealSpec spec;
    spec.pair_value = [](const Matrix& p, int i, int j) {
        return (p.row(i) - p.row(j)).squaredNorm();
    };
    spec.criterion = [](const std::vector<double>& pair, int m) {
        double lo = kInf;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                lo = std::min(lo, pair[static_cast<std::size_t>(i) * m + j]);
            }
        }
        return lo;
    };
    DesignMatrix design;
    design.points = anneal_lhd(n, d, seed, iters, spec, nullptr);
    design.generator = DesignGenerator::MaximinLhd;
    design.seed = seed;
    return design;
}

DesignMatrix maxpro_design(int n, int d, std::uint64_t seed, int iters) {
    check_nd(n, d, "maxpro_design");
    AnnealSpec spec;
    spec.pair_value = [](const Matrix& p, int i, int j) {
        double prod = 1.0;
        for (int k = 0; k < p.cols(); ++k) {
            const double t = p(i, k) - p(j, k);
            prod *= t * t;
        }
        return 1.0 / prod;
    };
    // Annealing maximizes, so flip the sign of the MaxPro sum.
    spec.criterion = [](const std::vector<double>& pair, int m) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            for (int j = i + 1; j < m; ++j) {
                s += pair[static_cast<std::size_t>(i) * m + j];
            }
        }
        return -s;
    };
    DesignMatrix design;
    design.points = anneal_lhd(n, d, seed, iters, spec, nullptr);
    design.generator = DesignGenerator::MaxPro;
    design.seed = seed;
    return design;
}

DesignMatrix sobol_points(int n, int d, int skip) {
    check_nd(n, d, "sobol_points");
    if (skip < 0) throw ValidationError("sobol_points: skip must be >= 0");
    SobolSequence seq(d);
    seq.skip(static_cast<std::uint64_t>(skip));
    DesignMatrix design;
    design.points = seq.take(n);
    design.generator = DesignGenerator::Sobol;
    design.seed = static_cast<std::uint64_t>(skip);  // reported as skip=
    return design;
}

DesignMatrix random_design(int n, int d, std::uint64_t seed) {
    check_nd(n, d, "random_design");
    Rng rng(seed);
    DesignMatrix design;
    design.points.resize(n, d);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) design.points(i, k) = rng.uniform01();
    }
    design.generator = DesignGenerator::Random;
    design.seed = seed;
    return design;
}

double min_pairwise_distance(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    double lo = kInf;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            lo = std::min(lo, (points.row(i) - points.row(j)).norm());
        }
    }
    return lo;
}

double maxpro_criterion(const Matrix& points) {
    const int n = static_cast<int>(points.rows());
    const int d = static_cast<int>(points.cols());
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double prod = 1.0;
            for (int k = 0; k < d; ++k) {
                const double t = points(i, k) - points(j, k);
                prod *= t * t;
            }
            if (prod == 0.0) return kInf;
            terms.push_back(1.0 / prod);
        }
    }
    return pairwise_sum(terms);
}

// ---------------------------------------------------------------------------
// CSV + meta round trip.
// ---------------------------------------------------------------------------

void write_design_csv(const DesignMatrix& design, const std::string& path) {
    if (design.n() < 1) throw ValidationError("refusing to write an empty design");
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    for (int k = 0; k < design.d(); ++k) out << (k ? "," : "") << "x" << k + 1;
    out << "\n";
    for (int i = 0; i < design.n(); ++i) {
        for (int k = 0; k < design.d(); ++k) {
            out << (k ? "," : "") << fmt17(design.points(i, k));
        }
        out << "\n";
    }
    if (!out) throw ValidationError("failed while writing '" + path + "'");

    std::ofstream meta(path + ".meta");
    if (!meta) throw ValidationError("cannot open '" + path + ".meta' for writing");
    meta << "generator=" << to_string(design.generator) << "\n";
    meta << "n=" << design.n() << "\n";
    meta << "d=" << design.d() << "\n";
    if (design.seed) {
        meta << (design.generator == DesignGenerator::Sobol ? "skip=" : "seed=")
             << *design.seed << "\n";
    }
    if (design.l) meta << "l=" << *design.l << "\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& cell, int row, int col) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(cell, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != cell.size() || cell.empty()) {
        std::ostringstream msg;
        msg << "design CSV: cell at data row " << row + 1 << ", column " << col + 1
            << " is not a number: '" << cell << "'";
        throw ValidationError(msg.str());
    }
    return v;
}

}  // namespace

DesignMatrix read_design_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open design file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("design file '" + path + "' is empty");
    const auto header = split_csv_line(line);
    const int d = static_cast<int>(header.size());
    for (int k = 0; k < d; ++k) {
        if (header[static_cast<std::size_t>(k)] != "x" + std::to_string(k + 1)) {
            throw ValidationError("design CSV: header must be x1,...,xd");
        }
    }
    std::vector<Vector> rows;
    int lineno = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != d) {
            std::ostringstream msg;
            msg << "design CSV: data row " << lineno + 1 << " has " << cells.size()
                << " cells, expected " << d;
            throw ValidationError(msg.str());
        }
        Vector row(d);
        for (int k = 0; k < d; ++k) {
            const double v = parse_cell(cells[static_cast<std::size_t>(k)], lineno, k);
            if (!(v >= 0.0 && v <= 1.0)) {
                std::ostringstream msg;
                msg << "design CSV: coordinate out of [0, 1] at data row " << lineno + 1
                    << ", column " << k + 1 << " (value " << v << ")";
                throw ValidationError(msg.str());
            }
            row[k] = v;
        }
        rows.push_back(std::move(row));
        ++lineno;
    }
    if (rows.empty()) throw ValidationError("design file '" + path + "' has no rows");

    DesignMatrix design;
    design.points.resize(static_cast<int>(rows.size()), d);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        design.points.row(static_cast<int>(i)) = rows[i];
    }

    const std::string meta_path = path + ".meta";
    if (std::filesystem::exists(meta_path)) {
        std::ifstream meta(meta_path);
        if (!meta) throw ValidationError("cannot open '" + meta_path + "'");
        while (std::getline(meta, line)) {
            if (line.empty() || line[0] == '#') continue;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("meta file: expected key=value, got '" + line + "'");
            }
            const std::string key = line.substr(0, eq);
            const std::string val = line.substr(eq + 1);
            if (key == "generator") {
                design.generator = design_generator_from_string(val);
            } else if (key == "seed" || key == "skip") {
                design.seed = std::stoull(val);
            } else if (key == "l") {
                design.l = std::stoi(val);
            } else if (key == "n") {
                if (std::stoi(val) != design.n()) {
                    throw ValidationError("meta file: n does not match the CSV");
                }
            } else if (key == "d") {
                if (std::stoi(val) != design.d()) {
                    throw ValidationError("meta file: d does not match the CSV");
                }
            } else {
                throw ValidationError("meta file: unknown key '" + key + "'");
            }
        }
        if ((design.generator == DesignGenerator::Mofat ||
             design.generator == DesignGenerator::Ofat)) {
            if (!design.l || design.n() % (design.d() + 1) != 0 ||
                *design.l != design.n() / (design.d() + 1)) {
                throw ValidationError("meta file: l inconsistent with a block design");
            }
            const int l = *design.l;
            for (int b = 0; b < l; ++b) {
                OfatBlockRows rows_b;
                rows_b.base_row = b * (d + 1);
                for (int k = 0; k < d; ++k) {
                    rows_b.factor_rows.push_back(b * (d + 1) + 1 + k);
                }
                design.blocks.push_back(std::move(rows_b));
            }
            validate_ofat_structure(design);
        }
    }
    return design;
}

}  // namespace alkit
