#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "pslab/field.hpp"
#include "pslab/grid.hpp"
#include "pslab/test_function.hpp"

namespace pslab {

// Bounding lattice window of Z^d ∩ n*supp(f); nullopt when empty.
std::optional<LatticeWindow> support_window(const TestFunction& f, std::int64_t n);

// Z^d ∩ n*supp(f) in row-major order. The closed support box convention keeps
// boundary integer points. Cardinality is bounded by K*n^d with
// K = prod(e_i - a_i + 1), a property the tests pin down.
std::vector<Point> lattice_support(const TestFunction& f, std::int64_t n);

// mu_n(A) = number of sites with X = 1 in Z^d ∩ nA (closed box, boundary
// lattice points included). Throws precondition_error unless the sample
// window covers every such site; never silently truncates.
std::int64_t measure_of_box(const FieldSample& sample, const BoxRegion& box);

// ∫ f dmu_n = sum of f(j/n) X_j over the lattice support. Same coverage
// precondition as measure_of_box.
double integral_against(const TestFunction& f, const FieldSample& sample);

// f(j/n) for every lattice-support site, row-major; shared by the integral and
// the characteristic-function kernels.
std::vector<double> support_values(const TestFunction& f, std::int64_t n, const LatticeWindow& supp);

// ∫ over R^d of (e^{i t scale f(x)} - 1) dx. Tensor-product composite Simpson
// with panels aligned to the profile break abscissas; panel counts double until
// the estimate moves by less than kQuadTol, hard cap kQuadMaxPanels per axis
// (accuracy_error beyond it, carrying the last two estimates). The real part
// is nonpositive up to roundoff since |e^{i theta}| = 1.
inline constexpr double kQuadTol = 1e-10;
inline constexpr std::int64_t kQuadMaxPanels = std::int64_t{1} << 20;
std::complex<double> charfn_integral(const TestFunction& f, double t, double scale);

}  // namespace pslab
