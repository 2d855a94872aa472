// optics.hpp: Jones calculus plus spatial-mode bookkeeping for the photonic
// switch. The photon's path (R/U) carries the control and its polarization
// (H = |0>, V = |1>) carries the target inside the switch. After
// recombination each of the four (a1, a2) loops has a single output path
// whose polarization carries the control again (R -> H, U -> V).
//
// Spatial modes:
//   in                      source photon before the input PBS
//   R[row,col], U[row,col]  arm beams; row = Alice 1's BD displacement
//                           (1 = down, a1 = 1), col = Alice 2's BD
//                           displacement (1 = left, a2 = 0)
//   loop(a1,a2)             recombined output of one interferometer loop
//   dump(a1,a2)             unused port of the recombination PBS
//   det(a1,a2;c)            Charlie's PBS port c behind loop (a1, a2)

#pragma once

#include "qswitch/correlation.hpp"
#include "qswitch/linalg.hpp"
#include "qswitch/switch_model.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace qswitch::optics {

using Jones = Eigen::Matrix2cd;

/// Half-wave plate with fast axis at theta: [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
Jones hwp(double theta);
/// Quarter-wave plate: R(theta) diag(1, i) R(-theta).
Jones qwp(double theta);
/// EOM with its crystal at 45 degrees: [[cos(t/2), i sin(t/2)], [i sin(t/2), cos(t/2)]].
Jones eom(double retardance);
/// Real rotation [[cos t, -sin t], [sin t, cos t]].
Jones rotation(double theta);

/// diag(1, -i) EOM(2 theta) diag(1, i), which equals rotation(theta).
Jones measurement_rotation(double theta);

/// Rotation angle that turns a PBS (H -> outcome 0) into a projective
/// measurement along the XZ-plane Bloch direction `bloch_theta`. Since
/// U^dagger Z U = cos(2t) Z - sin(2t) X for U = rotation(t), this is
/// -bloch_theta / 2.
double rotation_angle_for_bloch(double bloch_theta);

enum class Pol : int { H = 0, V = 1 };
enum class Path : int { R = 0, U = 1 };

namespace modes {
inline constexpr int kCount = 25;
int input();
int arm(Path path, int row, int col);
int loop(int a1, int a2);
int dump(int a1, int a2);
int detector(int a1, int a2, int port);
std::string label(int mode);
}  // namespace modes

/// Amplitudes over (spatial mode, polarization); flat index 2*mode + pol.
class ModeState {
 public:
  ModeState() : amps_(Vector::Zero(2 * modes::kCount)) {}
  static ModeState single(int mode, Pol pol);

  Complex& at(int mode, Pol pol) { return amps_(2 * mode + static_cast<int>(pol)); }
  Complex at(int mode, Pol pol) const { return amps_(2 * mode + static_cast<int>(pol)); }
  const Vector& amplitudes() const { return amps_; }
  Vector& amplitudes() { return amps_; }
  double norm_squared() const { return amps_.squaredNorm(); }

 private:
  Vector amps_;
};

enum class ElementKind { HWP, QWP, EOM, PBS, BD };
std::string to_string(ElementKind kind);

/// Polarization-preserving move of one (mode, pol) amplitude, used by
/// PBS and BD elements.
struct Route {
  int from;
  Pol pol;
  int to;
};

struct OpticalElement {
  ElementKind kind;
  std::string label;
  double angle = 0.0;         // waveplate axis or EOM retardance, radians
  std::vector<int> acts_on;   // spatial modes (waveplates and EOM)
  std::vector<Route> routes;  // PBS and BD
  std::string direction;      // BD displacement direction, for documentation

  void apply(ModeState& state) const;
};

/// Polarization action of an element. PBS and BD only select, so identity.
Jones jones_matrix(const OpticalElement& element);

/// Throws std::invalid_argument unless the routes form an injective map.
void validate_routes(const OpticalElement& element);

/// Full (2*kCount)x(2*kCount) matrix of an element sequence.
Matrix sequence_matrix(std::span<const OpticalElement> elements);

struct NetworkOptions {
  /// Added to every re-preparation HWP angle. Nonzero values break the
  /// switch and serve as a negative control.
  double reprep_angle_offset = 0.0;
};

class SwitchNetwork {
 public:
  SwitchNetwork(int x1, int x2, std::vector<OpticalElement> elements)
      : x1_(x1), x2_(x2), elements_(std::move(elements)) {}

  int x1() const { return x1_; }
  int x2() const { return x2_; }
  const std::vector<OpticalElement>& elements() const { return elements_; }

  /// Output modes (loop or dump) that the network ends in.
  std::vector<int> terminal_loops() const;

  ModeState propagate(ModeState state) const;
  /// Columns: images of (in, H) and (in, V).
  Matrix transfer() const;

 private:
  int x1_;
  int x2_;
  std::vector<OpticalElement> elements_;
};

SwitchNetwork build_switch_network(int x1, int x2, const NetworkOptions& options = {});

/// QWP(0), EOM(2t), QWP(90 deg) and a PBS behind every loop, measuring along
/// the given Bloch direction.
std::vector<OpticalElement> charlie_stage(double bloch_theta);

/// Detector probabilities for a B ⊗ C state given the map from the source
/// photon's polarization to all modes (2*kCount x 2). Bob is applied as an
/// abstract projector.
OutcomeRow probabilities_from_transfer(const LinearOperator& bc_state, const Matrix& transfer,
                                       int y, const MeasurementBases& bases = {});

/// End-to-end p(a1 a2 b c | setting) through the optical network.
OutcomeRow simulate_network(const LinearOperator& bc_state, const Setting& setting,
                            const MeasurementBases& bases = {},
                            const NetworkOptions& options = {});

CorrelationTable simulate_table(const LinearOperator& bc_state, const MeasurementBases& bases = {},
                                const NetworkOptions& options = {});

nlohmann::json network_to_json(const SwitchNetwork& network);

}  // namespace qswitch::optics
