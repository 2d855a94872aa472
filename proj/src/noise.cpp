#include "qswitch/noise.hpp"

#include "qswitch/rng.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>

namespace qswitch {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// Gaussian offsets for the four measurement angles (Bob y=0,1; Charlie
// z=0,1): Halton points in bases 2, 3, 5, 7 with a seeded random shift,
// mapped through the normal quantile.
std::vector<std::array<double, 4>> jitter_offsets(double sigma, std::uint64_t seed) {
  constexpr std::array<std::uint64_t, 4> bases{2, 3, 5, 7};
  CounterRng rng(seed, /*stream=*/0x4a17);
  std::array<double, 4> shift{};
  for (double& s : shift) s = rng.uniform();

  std::vector<std::array<double, 4>> out(kJitterSamples);
  for (int i = 0; i < kJitterSamples; ++i) {
    for (int d = 0; d < 4; ++d) {
      double u = radical_inverse(static_cast<std::uint64_t>(i) + 1, bases[d]) + shift[d];
      u -= std::floor(u);
      u = std::clamp(u, 1e-16, 1.0 - 1e-16);
      out[i][d] = sigma * std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
    }
  }
  return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  const double fhi = f(hi);
  if ((flo > 0) == (fhi > 0)) throw NoCrossing("no sign change in the search interval");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void NoiseParams::validate() const {
  check_unit(visibility, "visibility");
  check_unit(control_dephasing, "control_dephasing");
  if (!(angle_jitter >= 0.0) || !std::isfinite(angle_jitter)) {
    throw std::invalid_argument("angle_jitter must be a finite nonnegative number");
  }
}

LinearOperator werner_state(double v) {
  check_unit(v, "visibility");
  const Matrix m = v * phi_plus().matrix() + (1.0 - v) * Matrix::Identity(4, 4) / 4.0;
  return {m, {2, 2}};
}

double visibility_from_fidelity(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) {
    throw std::invalid_argument("fidelity must lie in [1/4, 1] for a Werner state");
  }
  return (4.0 * fidelity - 1.0) / 3.0;
}

double fidelity_with_phi_plus(const LinearOperator& bc_state) {
  return born_probability(bc_state, phi_plus());
}

LinearOperator dephase_control(const LinearOperator& state, double gamma, int control) {
  check_unit(gamma, "dephasing");
  const auto& dims = state.dims();
  if (control < 0 || control >= state.num_subsystems()) {
    throw std::out_of_range("dephase_control: control index out of range");
  }
  int stride = 1;
  for (int i = control + 1; i < state.num_subsystems(); ++i) stride *= dims[i];
  const int dc = dims[control];
  Matrix m = state.matrix();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if ((r / stride) % dc != (c / stride) % dc) m(r, c) *= (1.0 - gamma);
  return {std::move(m), dims};
}

CorrelationTable noisy_table(const NoiseParams& params, std::uint64_t seed) {
  params.validate();
  const LinearOperator source = werner_state(params.visibility);
  const MeasurementBases nominal;

  std::vector<MeasurementBases> samples;
  if (params.angle_jitter > 0.0) {
    for (const auto& d : jitter_offsets(params.angle_jitter, seed)) {
      MeasurementBases b = nominal;
      b.bob[0] += d[0];
      b.bob[1] += d[1];
      b.charlie[0] += d[2];
      b.charlie[1] += d[3];
      samples.push_back(b);
    }
  } else {
    samples.push_back(nominal);
  }

  CorrelationTable table;
  for (int x = 0; x < 4; ++x) {
    BranchStates branches = post_switch_branches(source, x >> 1, x & 1);
    for (auto& b : branches) b = dephase_control(b, params.control_dephasing);
    const ReducedBranches reduced = discard_target(branches);
    for (int yz = 0; yz < 4; ++yz) {
      const Setting s{x >> 1, x & 1, yz >> 1, yz & 1};
      OutcomeRow acc{};
      for (const auto& bases : samples) {
        const OutcomeRow row = measure_reduced(reduced, s.y, s.z, bases);
        for (int o = 0; o < kNumOutcomes; ++o) acc[o] += row[o];
      }
      for (double& p : acc) p /= static_cast<double>(samples.size());
      table.set_row(s, acc);
    }
  }
  return table;
}

VbcBreakdown vbc_under_noise(const NoiseParams& params, std::uint64_t seed) {
  return vbc_terms(noisy_table(params, seed));
}

double vbc_closed_form(double v, double gamma) {
  return 1.25 + v / 4.0 + v * std::sqrt(2.0) * (2.0 - gamma) / 8.0;
}

double threshold_visibility(double gamma, double jitter, std::uint64_t seed) {
  check_unit(gamma, "dephasing");
  auto excess = [&](double v) {
    return vbc_under_noise({v, gamma, jitter}, seed).total - kClassicalBound;
  };
  return bisect(excess, 0.0, 1.0, 1e-9);
}

double fit_dephasing(double visibility, double target_total) {
  auto excess = [&](double gamma) {
    return vbc_under_noise({visibility, gamma, 0.0}).total - target_total;
  };
  return bisect(excess, 0.0, 1.0, 1e-10);
}

}  // namespace qswitch
