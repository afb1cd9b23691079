#pragma once

#include <functional>
#include <span>
#include <vector>

#include "loggas/drift.hpp"
#include "loggas/geometry.hpp"
#include "loggas/model.hpp"

namespace loggas {

/// Binned k-point correlation estimate on the product grid edges^(k*d), cells flattened
/// row-major with the first coordinate of the first point slowest.
struct CorrelationEstimate {
  int k = 1;
  Dimension dimension = Dimension::OneD;
  std::vector<double> bin_edges;
  std::vector<double> values;
  std::vector<double> counts;
  std::size_t n_samples = 0;
};

/// Counts ordered k-tuples of distinct points inside the window per cell and divides by
/// n_samples and the cell volume.
CorrelationEstimate estimate_rho_k(std::span<const LabeledState> samples, int k, std::span<const double> bin_edges,
                                   const WindowRadius& window);

/// One-dimensional binned curve: value and raw count per bin.
struct BinnedCurve {
  std::vector<double> edges;
  std::vector<double> values;
  std::vector<double> counts;
  std::size_t n_references = 0;
  std::vector<double> centers() const;
};

/// rho^2(0, s) in 1D by translation averaging: every point with |s_i| < halfwidth serves
/// as a reference and |s_j - s_i| is binned. Normalized by n_samples * 2 halfwidth * 2 h.
BinnedCurve pair_gap_estimate_1d(std::span<const LabeledState> samples, double halfwidth,
                                 std::span<const double> edges);
/// rho^2(0, z) in 2D as a function of |z|, references in |x_i| < radius. Normalized by
/// n_samples * pi radius^2 * annulus area.
BinnedCurve radial_pair_estimate_2d(std::span<const LabeledState> samples, double radius,
                                    std::span<const double> edges);
/// Points per unit area in the annuli edges[b] <= |z| < edges[b+1], per sample.
BinnedCurve radial_density_2d(std::span<const LabeledState> samples, std::span<const double> edges);
/// Mean number of points per unit area in |z| <= radius (length in 1D).
double central_density(std::span<const LabeledState> samples, double radius);
/// Histogram density of pooled 1D points, as a piecewise-linear one-point model through
/// the bin centers.
Tabulated histogram_one_point(std::span<const LabeledState> samples, double lo, double hi, int bins);

double sine_kernel(double x, double y);
/// det[K_sin(x_i, x_j)].
double sine_rho_k(std::span<const double> points);
/// 1 - (sin(pi s)/(pi s))^2 averaged over [a, b].
double sine_rho2_bin_average(double a, double b);

/// (1/pi) exp(-(|x|^2 + |y|^2)/2 + x conj(y)) as a complex number.
Point2 ginibre_kernel(Point2 x, Point2 y);
/// det[K_gin(x_i, x_j)]; throws if the imaginary part exceeds 1e-10.
double ginibre_rho_k(std::span<const Point2> points);
/// 1 - exp(-s^2) averaged over the annulus a < |z| < b.
double ginibre_ratio_annulus_average(double a, double b);

/// Determinant by partial-pivot LU (row-major n x n).
double determinant(std::vector<double> a, std::size_t n);

/// Wigner semicircle CDF of (1/pi) sqrt(2 - u^2).
double semicircle_cdf(double x);
/// CDF of the semicircle law (2/(pi R^2)) sqrt(R^2 - u^2).
double semicircle_cdf_radius(double x, double radius);

/// Gaussian upper tail: int_t^inf exp(-x^2/2)/sqrt(2 pi) dx.
double scaled_erfc_R(double t);
/// P(max_{[0,T]} W <= a) = 1 - 2 R(a/sqrt T) for a >= 0, else 0.
double reflected_bm_max_cdf(double a, double t);

/// Mean over samples of sum_{i >= l} R((|s_i| - r)/T), labels 1-based by ascending modulus.
double tightness_diagnostic(std::span<const LabeledState> samples, std::size_t l, double r, double t);

/// sup |F_n - F| evaluated exactly at the sorted sample points.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
/// sup |F_n - G_m| of two empirical distributions.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pooled 1D coordinates (or moduli in 2D) of all samples.
std::vector<double> pooled_values(std::span<const LabeledState> samples);

}  // namespace loggas
