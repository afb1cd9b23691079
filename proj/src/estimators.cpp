#include "loggas/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "loggas/errors.hpp"

namespace loggas {

namespace {

constexpr double kPi = std::numbers::pi;

void require_edges(std::span<const double> edges) {
  if (edges.size() < 2) throw SpecError("at least one bin is required");
  for (std::size_t k = 1; k < edges.size(); ++k)
    if (!(edges[k] > edges[k - 1])) throw SpecError("bin edges must be strictly increasing");
}

void require_samples(std::span<const LabeledState> samples) {
  if (samples.empty()) throw SpecError("empty sample list");
}

// Bin index of v, or -1 outside [edges.front(), edges.back()).
long bin_of(std::span<const double> edges, double v) {
  if (!(v >= edges.front()) || !(v < edges.back())) return -1;
  return static_cast<long>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) - 1;
}

double sinc_pi(double s) {
  if (std::abs(s) < 1e-8) return 1.0 - kPi * kPi * s * s / 6.0;
  return std::sin(kPi * s) / (kPi * s);
}

template <typename T>
T lu_determinant(std::vector<T> a, std::size_t n) {
  T det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[pivot * n + c])) pivot = r;
    if (a[pivot * n + c] == T(0.0)) return T(0.0);
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[pivot * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const T f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

template <typename T>
T small_determinant(const std::vector<T>& a, std::size_t n) {
  if (n == 0) return T(1.0);
  if (n == 1) return a[0];
  if (n == 2) return a[0] * a[3] - a[1] * a[2];
  if (n == 3) {
    return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
           a[2] * (a[3] * a[7] - a[4] * a[6]);
  }
  return lu_determinant(a, n);
}

}  // namespace

CorrelationEstimate estimate_rho_k(std::span<const LabeledState> samples, int k, std::span<const double> bin_edges,
                                   const WindowRadius& window) {
  require_samples(samples);
  require_edges(bin_edges);
  if (k < 1) throw SpecError("k must be positive");
  const Dimension dim = samples.front().dimension();
  const auto d = static_cast<std::size_t>(components(dim));
  const std::size_t axes = static_cast<std::size_t>(k) * d;
  const std::size_t nb = bin_edges.size() - 1;
  std::size_t cells = 1;
  for (std::size_t a = 0; a < axes; ++a) cells *= nb;

  CorrelationEstimate est;
  est.k = k;
  est.dimension = dim;
  est.bin_edges.assign(bin_edges.begin(), bin_edges.end());
  est.counts.assign(cells, 0.0);
  est.n_samples = samples.size();
  const double r = radius_of(window);

  std::vector<std::size_t> tuple(static_cast<std::size_t>(k));
  for (const auto& s : samples) {
    if (s.dimension() != dim) throw DimensionError("samples mix dimensions");
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.modulus(i) < r) inside.push_back(i);
    const std::size_t m = inside.size();
    if (m < static_cast<std::size_t>(k)) continue;
    // Odometer over ordered k-tuples of distinct indices.
    std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
    for (;;) {
      bool distinct = true;
      for (std::size_t a = 0; a < idx.size() && distinct; ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b)
          if (idx[a] == idx[b]) {
            distinct = false;
            break;
          }
      if (distinct) {
        std::size_t cell = 0;
        bool ok = true;
        for (std::size_t a = 0; a < idx.size() && ok; ++a) {
          const std::size_t p = inside[idx[a]];
          for (std::size_t c = 0; c < d; ++c) {
            const long b = bin_of(bin_edges, s.coords()[p * d + c]);
            if (b < 0) {
              ok = false;
              break;
            }
            cell = cell * nb + static_cast<std::size_t>(b);
          }
        }
        if (ok) est.counts[cell] += 1.0;
      }
      std::size_t pos = idx.size();
      while (pos > 0 && ++idx[pos - 1] == m) idx[--pos] = 0;
      if (pos == 0) break;
    }
  }

  est.values.resize(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    double volume = 1.0;
    std::size_t rest = cell;
    for (std::size_t a = 0; a < axes; ++a) {
      const std::size_t b = rest % nb;
      rest /= nb;
      volume *= bin_edges[b + 1] - bin_edges[b];
    }
    est.values[cell] = est.counts[cell] / (static_cast<double>(samples.size()) * volume);
  }
  return est;
}

std::vector<double> BinnedCurve::centers() const {
  std::vector<double> c(edges.size() - 1);
  for (std::size_t b = 0; b < c.size(); ++b) c[b] = 0.5 * (edges[b] + edges[b + 1]);
  return c;
}

BinnedCurve pair_gap_estimate_1d(std::span<const LabeledState> samples, double halfwidth,
                                 std::span<const double> edges) {
  require_samples(samples);
  require_edges(edges);
  if (edges.front() < 0.0) throw SpecError("gap bins must be nonnegative");
  BinnedCurve out;
  out.edges.assign(edges.begin(), edges.end());
  out.counts.assign(edges.size() - 1, 0.0);
  const double reach = edges.back();
  for (const auto& s : samples) {
    const auto xs = s.xs();
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      if (!(std::abs(sorted[i]) < halfwidth)) continue;
      ++out.n_references;
      for (std::size_t j = i + 1; j < sorted.size() && sorted[j] - sorted[i] < reach; ++j) {
        const long b = bin_of(edges, sorted[j] - sorted[i]);
        if (b >= 0) out.counts[static_cast<std::size_t>(b)] += 1.0;
      }
      for (std::size_t j = i; j-- > 0 && sorted[i] - sorted[j] < reach;) {
        const long b = bin_of(edges, sorted[i] - sorted[j]);
        if (b >= 0) out.counts[static_cast<std::size_t>(b)] += 1.0;
      }
    }
  }
  out.values.resize(out.counts.size());
  const double norm = static_cast<double>(samples.size()) * 2.0 * halfwidth;
  for (std::size_t b = 0; b < out.values.size(); ++b)
    out.values[b] = out.counts[b] / (norm * 2.0 * (edges[b + 1] - edges[b]));
  return out;
}

BinnedCurve radial_pair_estimate_2d(std::span<const LabeledState> samples, double radius,
                                    std::span<const double> edges) {
  require_samples(samples);
  require_edges(edges);
  if (edges.front() < 0.0) throw SpecError("distance bins must be nonnegative");
  BinnedCurve out;
  out.edges.assign(edges.begin(), edges.end());
  out.counts.assign(edges.size() - 1, 0.0);
  for (const auto& s : samples) {
    if (s.dimension() != Dimension::TwoD) throw DimensionError("radial pair estimate needs planar samples");
    const auto pts = s.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!(norm(pts[i]) < radius)) continue;
      ++out.n_references;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == i) continue;
        const long b = bin_of(edges, norm(pts[j] - pts[i]));
        if (b >= 0) out.counts[static_cast<std::size_t>(b)] += 1.0;
      }
    }
  }
  out.values.resize(out.counts.size());
  const double norm_ref = static_cast<double>(samples.size()) * kPi * radius * radius;
  for (std::size_t b = 0; b < out.values.size(); ++b) {
    const double area = kPi * (edges[b + 1] * edges[b + 1] - edges[b] * edges[b]);
    out.values[b] = out.counts[b] / (norm_ref * area);
  }
  return out;
}

BinnedCurve radial_density_2d(std::span<const LabeledState> samples, std::span<const double> edges) {
  require_samples(samples);
  require_edges(edges);
  BinnedCurve out;
  out.edges.assign(edges.begin(), edges.end());
  out.counts.assign(edges.size() - 1, 0.0);
  for (const auto& s : samples) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const long b = bin_of(edges, s.modulus(i));
      if (b >= 0) out.counts[static_cast<std::size_t>(b)] += 1.0;
    }
  }
  out.values.resize(out.counts.size());
  for (std::size_t b = 0; b < out.values.size(); ++b) {
    const double area = kPi * (edges[b + 1] * edges[b + 1] - edges[b] * edges[b]);
    out.values[b] = out.counts[b] / (static_cast<double>(samples.size()) * area);
  }
  return out;
}

double central_density(std::span<const LabeledState> samples, double radius) {
  require_samples(samples);
  double count = 0.0;
  for (const auto& s : samples)
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s.modulus(i) <= radius) count += 1.0;
  const double measure = samples.front().dimension() == Dimension::OneD ? 2.0 * radius : kPi * radius * radius;
  return count / (static_cast<double>(samples.size()) * measure);
}

Tabulated histogram_one_point(std::span<const LabeledState> samples, double lo, double hi, int bins) {
  require_samples(samples);
  if (!(hi > lo) || bins < 2) throw SpecError("histogram needs hi > lo and at least two bins");
  const double h = (hi - lo) / bins;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (const auto& s : samples) {
    for (double x : s.xs()) {
      if (!(x >= lo && x < hi)) continue;
      const auto b = std::min(static_cast<std::size_t>((x - lo) / h), counts.size() - 1);
      counts[b] += 1.0;
    }
  }
  Tabulated t;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    t.grid.push_back(lo + (static_cast<double>(b) + 0.5) * h);
    t.values.push_back(counts[b] / (static_cast<double>(samples.size()) * h));
  }
  return t;
}

double sine_kernel(double x, double y) { return sinc_pi(x - y); }

double sine_rho_k(std::span<const double> points) {
  const std::size_t m = points.size();
  std::vector<double> a(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a[i * m + j] = sine_kernel(points[i], points[j]);
  return small_determinant(a, m);
}

double sine_rho2_bin_average(double a, double b) {
  if (!(b > a)) throw SpecError("empty bin");
  const double integral = boost::math::quadrature::gauss<double, 30>::integrate(
      [](double s) {
        const double k = sinc_pi(s);
        return 1.0 - k * k;
      },
      a, b);
  return integral / (b - a);
}

Point2 ginibre_kernel(Point2 x, Point2 y) {
  // x conj(y) = (x1 y1 + x2 y2) + i (x2 y1 - x1 y2)
  const double re = -0.5 * (norm2(x) + norm2(y)) + (x.x * y.x + x.y * y.y);
  const double im = x.y * y.x - x.x * y.y;
  const double mag = std::exp(re) / kPi;
  return {mag * std::cos(im), mag * std::sin(im)};
}

double ginibre_rho_k(std::span<const Point2> points) {
  const std::size_t m = points.size();
  std::vector<std::complex<double>> a(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const Point2 k = ginibre_kernel(points[i], points[j]);
      a[i * m + j] = {k.x, k.y};
    }
  }
  const std::complex<double> det = small_determinant(a, m);
  if (std::abs(det.imag()) > 1e-10) throw Error("Ginibre determinant has a nonzero imaginary part");
  return det.real();
}

double ginibre_ratio_annulus_average(double a, double b) {
  if (!(b > a) || a < 0.0) throw SpecError("empty annulus");
  return 1.0 - (std::exp(-a * a) - std::exp(-b * b)) / (b * b - a * a);
}

double determinant(std::vector<double> a, std::size_t n) {
  if (a.size() != n * n) throw DimensionError("matrix size mismatch");
  return lu_determinant(std::move(a), n);
}

double semicircle_cdf(double x) { return semicircle_cdf_radius(x, std::numbers::sqrt2); }

double semicircle_cdf_radius(double x, double radius) {
  if (x <= -radius) return 0.0;
  if (x >= radius) return 1.0;
  const double v = x / radius;
  return std::clamp(0.5 + (v * std::sqrt(1.0 - v * v) + std::asin(v)) / kPi, 0.0, 1.0);
}

double scaled_erfc_R(double t) { return 0.5 * std::erfc(t / std::numbers::sqrt2); }

double reflected_bm_max_cdf(double a, double t) {
  if (!(t > 0.0)) throw SpecError("T must be positive");
  if (!(a >= 0.0)) return 0.0;
  return 1.0 - 2.0 * scaled_erfc_R(a / std::sqrt(t));
}

double tightness_diagnostic(std::span<const LabeledState> samples, std::size_t l, double r, double t) {
  if (samples.empty()) return 0.0;
  if (l < 1) throw SpecError("l is 1-based");
  if (!(t > 0.0)) throw SpecError("T must be positive");
  double acc = 0.0;
  for (const auto& s : samples) {
    if (s.order() != LabelOrder::AscendingModulus)
      throw OrderingError("tightness diagnostic requires AscendingModulus labels");
    for (std::size_t i = l - 1; i < s.size(); ++i) acc += scaled_erfc_R((s.modulus(i) - r) / t);
  }
  return acc / static_cast<double>(samples.size());
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw SpecError("KS statistic of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw SpecError("KS statistic of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

std::vector<double> pooled_values(std::span<const LabeledState> samples) {
  std::vector<double> out;
  for (const auto& s : samples) {
    if (s.dimension() == Dimension::OneD) {
      out.insert(out.end(), s.xs().begin(), s.xs().end());
    } else {
      for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.modulus(i));
    }
  }
  return out;
}

}  // namespace loggas
