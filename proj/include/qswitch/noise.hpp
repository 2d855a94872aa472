// noise.hpp: imperfection models for the switch experiment and the
// closed-form value of the functional under them.
//
// Werner noise acts on the source B ⊗ C state, dephasing acts on the control
// after the switch and before Charlie, and angle jitter perturbs every
// measurement direction by a Gaussian offset averaged over a fixed
// quasi-Monte-Carlo sample set.

#pragma once

#include "qswitch/correlation.hpp"
#include "qswitch/linalg.hpp"
#include "qswitch/switch_model.hpp"

#include <cstdint>
#include <stdexcept>

namespace qswitch {

struct NoiseParams {
  double visibility = 1.0;         // Werner weight v
  double control_dephasing = 0.0;  // gamma
  double angle_jitter = 0.0;       // sigma_theta, radians

  void validate() const;
};

inline constexpr int kJitterSamples = 1024;
inline constexpr double kClassicalBound = 1.75;

/// Raised when a bisection target is not bracketed by the parameter range.
class NoCrossing : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// v |phi+><phi+| + (1 - v) I/4.
LinearOperator werner_state(double v);

/// v = (4F - 1)/3; throws std::invalid_argument outside F in [1/4, 1].
double visibility_from_fidelity(double fidelity);

/// <phi+| rho |phi+>.
double fidelity_with_phi_plus(const LinearOperator& bc_state);

/// Scales the blocks of `state` that are off-diagonal in subsystem
/// `control` by (1 - gamma).
LinearOperator dephase_control(const LinearOperator& state, double gamma, int control = kControl);

/// Correlation table of the full noisy pipeline. `seed` only matters when
/// angle_jitter > 0.
CorrelationTable noisy_table(const NoiseParams& params, std::uint64_t seed = 0);

VbcBreakdown vbc_under_noise(const NoiseParams& params, std::uint64_t seed = 0);

/// 5/4 + v/4 + v sqrt(2) (2 - gamma)/8, valid without jitter.
double vbc_closed_form(double v, double gamma);

/// Visibility at which the pipeline total equals 7/4, by bisection to 1e-9.
/// Throws NoCrossing when the total stays below 7/4 for all v in [0, 1].
double threshold_visibility(double gamma, double jitter = 0.0, std::uint64_t seed = 0);

/// Dephasing at which the pipeline total equals `target_total` for the given
/// visibility, by bisection. Throws NoCrossing if not bracketed by [0, 1].
double fit_dephasing(double visibility, double target_total);

}  // namespace qswitch
