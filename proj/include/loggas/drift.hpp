#pragma once

#include <span>
#include <variant>
#include <vector>

#include "loggas/geometry.hpp"
#include "loggas/model.hpp"

namespace loggas {

struct FullInteraction {};
/// Sum over j with |x_i - x_j| < r.
struct RelativeDistance {
  double r = 1.0;
};
/// Sum over j with |x_j| < r.
struct AbsolutePosition {
  double r = 1.0;
};
/// Index set of the pair interaction sum. Only the interaction term is restricted;
/// potential and tail terms are unaffected.
using TruncationMode = std::variant<FullInteraction, RelativeDistance, AbsolutePosition>;

/// One-point function rho(y) = level for |y| beyond the window.
struct ConstantOutside {
  double level = 1.0;
};
/// Piecewise-linear one-point function on an ascending grid, zero outside it.
/// In 2D the grid is radial: rho(y) = f(|y|).
struct Tabulated {
  std::vector<double> grid;
  std::vector<double> values;
};
using OnePointModel = std::variant<ConstantOutside, Tabulated>;

void validate_mode(const TruncationMode& mode);
void validate_one_point(const OnePointModel& rho1);

/// Minimum pair distance below which a pair term raises CollisionError.
inline constexpr double kCollisionGuard = 1e-12;

/// (beta/2) sum_{j != i} 1/(x_i - x_j) over the mode's index set.
double interaction_drift_1d(std::size_t i, const LabeledState& state, double beta, const TruncationMode& mode);
/// sum_{j != i} (x_i - x_j)/|x_i - x_j|^2 over the mode's index set.
Point2 interaction_drift_2d(std::size_t i, const LabeledState& state, const TruncationMode& mode);

/// Potential and collective terms of the strong non-Hermiticity SDE at particle i, with
/// w = zeta + x/sqrt(cN):
///   -(N/(1-w^2)) w/sqrt(cN) + (N/(1-w^2)) (omega/2) (w + w^dagger)/sqrt(cN)
///   - (2 gamma/sqrt(cN)) w (sum_j |w_j|^2 - N K_p).
Point2 strong_nonhermitian_extra_drift(std::size_t i, const LabeledState& state, const GinibreParams& params, int n);

/// (beta/2) int_{|y|>r} rho(y)/(x - y) dy. Requires |x| < r.
double tail_compensation_1d(double x, double r, double beta, const OnePointModel& rho1);
/// int_{|y|>r} rho(y) (x - y)/|x - y|^2 dy. Requires |x| < r.
Point2 tail_compensation_2d(Point2 x, double r, const OnePointModel& rho1);

/// Per-particle drift split by origin, in flattened coordinates.
struct DriftTerms {
  std::vector<double> interaction;
  std::vector<double> potential;
  std::vector<double> tail;
  std::vector<double> total() const;
};

/// Drift of the (windowed) N-particle SDE for the spec's frame:
///   1D bulk:  (beta/2) sum 1/(s_i - s_j) - (1/(2 rho)) V_beta'(s_i/(N rho) + theta) + tail
///   1D raw:   (beta/2) sum 1/(x_i - x_j) - (N/2) V_beta'(x_i) + tail
///   2D:       sum (x_i - x_j)/|x_i - x_j|^2 - x_i + tail, or the strong non-Hermiticity
///             terms in place of -x_i when Ginibre parameters are present.
/// The tail term is present only for a finite window. O(N^2) reference evaluation.
DriftTerms drift_terms(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                       const OnePointModel& rho1);
std::vector<double> full_drift(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                               const OnePointModel& rho1);

/// Same result as drift_terms with each pair visited once; for RelativeDistance in 1D
/// the sorted order bounds the inner loop. Checked against the reference in debug builds.
DriftTerms drift_terms_fast(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                            const OnePointModel& rho1);
std::vector<double> full_drift_fast(const LabeledState& state, const ModelSpec& spec, const TruncationMode& mode,
                                    const OnePointModel& rho1);

}  // namespace loggas
