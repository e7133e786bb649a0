#pragma once

#include <cstdint>
#include <vector>

#include "pslab/common.hpp"
#include "pslab/grid.hpp"

namespace pslab {

enum class FieldKind { pattern, or_field };

// One random-field family at a fixed scale: lattice dimension d, scale n,
// target intensity lambda, and a generator driven by an i.i.d. Bernoulli(q)
// field Y on Z^d.
//
//   pattern:   X_k = 1 iff Y = 1 on every site of k+G, with
//              q = (lambda/n^d)^(1/|G|), so P{X_k=1} = lambda/n^d exactly.
//   or_field:  d = 1, X_k = Y_k | Y_{k+1}, with q = lambda/n.
//
// q = 1 is a valid degenerate family (the all-ones field); q > 1 is rejected.
class FieldSpec {
  public:
    static FieldSpec pattern(int d, std::int64_t n, double lambda, std::vector<Point> shape);
    static FieldSpec or_field(std::int64_t n, double lambda);

    // Same family at another scale.
    FieldSpec with_scale(std::int64_t n) const;

    FieldKind kind() const { return kind_; }
    int dim() const { return d_; }
    std::int64_t scale() const { return n_; }
    double intensity() const { return lambda_; }
    const std::vector<Point>& pattern_set() const { return shape_; }

    // Underlying single-site probability q.
    double site_prob() const { return q_; }

    // P{X_0 = 1}: q^|G| for pattern, 2q - q^2 for or_field.
    double marginal_prob() const;

    // Y offsets that determine X_k: G for pattern, {0, 1} for or_field.
    const std::vector<Point>& offsets() const { return offsets_; }
    const Point& min_offset() const { return min_off_; }
    const Point& max_offset() const { return max_off_; }

    // Lags j != 0 where cov(X_0, X_j) can be nonzero:
    // (G - G) \ {0} for pattern, {-1, +1} for or_field.
    const std::vector<Point>& lag_set() const { return lags_; }

    // Mass each limit atom carries: 1 for pattern, 2 for or_field.
    int limit_mass() const { return kind_ == FieldKind::or_field ? 2 : 1; }

  private:
    FieldSpec() = default;

    FieldKind kind_ = FieldKind::pattern;
    int d_ = 1;
    std::int64_t n_ = 1;
    double lambda_ = 1.0;
    double q_ = 1.0;
    std::vector<Point> shape_;    // pattern only
    std::vector<Point> offsets_;
    Point min_off_, max_off_;
    std::vector<Point> lags_;
};

// |G ∪ (j+G)|. j = 0 is a domain error: the union degenerates to |G| there,
// while every nonzero translate gives at least |G| + 1.
std::int64_t union_size(const std::vector<Point>& shape, const Point& j);

// cov(X_0, X_j) in closed form: q^|G∪(j+G)| - q^(2|G|) for pattern,
// q(1-q)^3 at |j| = 1 and 0 otherwise for or_field. Never negative, and zero
// for every lag outside lag_set().
double exact_cov(const FieldSpec& spec, const Point& j);

// sigma(n) = sum of cov(X_0, X_j) over all j != 0; finite because only the
// lag set contributes.
double sigma(const FieldSpec& spec);

struct DecayRow {
    std::int64_t n;
    double sigma;
    double nd_sigma;  // n^d * sigma(n)
};

// Exact n^d * sigma(n) along a schedule of scales with d, lambda and the
// generator held fixed.
std::vector<DecayRow> decay_diagnostic(const FieldSpec& base, const std::vector<std::int64_t>& n_values);

// A sampled 0/1 configuration on a window plus the underlying Y values on the
// padded window that fully determine it. Immutable after creation.
struct FieldSample {
    FieldSpec spec;
    LatticeWindow window;  // X sites
    LatticeWindow padded;  // Y sites: window extended by the offset range
    std::uint64_t seed = 0;
    std::vector<std::uint8_t> x;  // row-major over window
    std::vector<std::uint8_t> y;  // row-major over padded

    std::uint8_t x_at(const Point& p) const { return x[static_cast<std::size_t>(window.flat_index(p))]; }

    // Recomputes every X from the stored Y values and compares; the transform
    // is deterministic, so this must always hold.
    bool x_consistent() const;
};

// The Y window backing X on `window`: extended per axis by the offset range,
// so every X value is exact rather than truncated at the boundary.
LatticeWindow padded_window(const FieldSpec& spec, const LatticeWindow& window);

// Draws Y ~ i.i.d. Bernoulli(q) on the padded window and derives X. Identical
// (spec, window, seed) yields bit-identical samples. Draws happen in row-major
// site order, one draw per site.
FieldSample sample_field(const FieldSpec& spec, const LatticeWindow& window, std::uint64_t seed);

namespace detail {

// Fast paths shared by sample_field and the Monte Carlo kernels, operating on
// caller-owned buffers so replicate loops do not allocate.
void fill_y(const FieldSpec& spec, const LatticeWindow& padded, std::uint64_t seed,
            std::vector<std::uint8_t>& y);
void derive_x(const FieldSpec& spec, const LatticeWindow& window, const LatticeWindow& padded,
              const std::vector<std::uint8_t>& y, std::vector<std::uint8_t>& x);

// Flat deltas of the spec offsets in the padded layout; X at padded flat index
// i is the AND (pattern) or OR (or_field) of y[i + delta] over deltas.
std::vector<std::int64_t> offset_deltas(const FieldSpec& spec, const LatticeWindow& padded);

}  // namespace detail

}  // namespace pslab
