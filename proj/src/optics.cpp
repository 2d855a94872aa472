#include "qswitch/optics.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

namespace qswitch::optics {

namespace {

constexpr double kDeg45 = std::numbers::pi / 4;
constexpr double kDeg90 = std::numbers::pi / 2;
const Complex kI{0.0, 1.0};

void check_bit(int v, const char* name) {
  if (v != 0 && v != 1) throw std::invalid_argument(std::string(name) + " must be 0 or 1");
}

OpticalElement waveplate(ElementKind kind, std::string label, double angle, int mode) {
  OpticalElement e{kind, std::move(label), angle, {mode}, {}, {}};
  return e;
}

OpticalElement router(ElementKind kind, std::string label, std::string direction,
                      std::vector<Route> routes) {
  OpticalElement e{kind, std::move(label), 0.0, {}, std::move(routes), std::move(direction)};
  for (const Route& r : e.routes) {
    if (std::find(e.acts_on.begin(), e.acts_on.end(), r.from) == e.acts_on.end()) {
      e.acts_on.push_back(r.from);
    }
  }
  validate_routes(e);
  return e;
}

std::string bits(int a, int b) { return std::to_string(a) + "," + std::to_string(b); }

}  // namespace

Jones hwp(double theta) {
  const double c = std::cos(2 * theta);
  const double s = std::sin(2 * theta);
  Jones m;
  m << c, s, s, -c;
  return m;
}

Jones rotation(double theta) {
  Jones m;
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

Jones qwp(double theta) {
  Jones retarder = Jones::Zero();
  retarder(0, 0) = 1.0;
  retarder(1, 1) = kI;
  return rotation(theta) * retarder * rotation(-theta);
}

Jones eom(double retardance) {
  const double c = std::cos(retardance / 2);
  const double s = std::sin(retardance / 2);
  Jones m;
  m << c, kI * s, kI * s, c;
  return m;
}

Jones measurement_rotation(double theta) {
  Jones left = Jones::Zero();
  left(0, 0) = 1.0;
  left(1, 1) = -kI;
  Jones right = Jones::Zero();
  right(0, 0) = 1.0;
  right(1, 1) = kI;
  return left * eom(2 * theta) * right;
}

double rotation_angle_for_bloch(double bloch_theta) { return -bloch_theta / 2; }

// ---------------------------------------------------------------------------
// Mode space

namespace modes {

// Layout: in (0), arms (1..8), loops (9..12), dumps (13..16), detectors (17..24).
int input() { return 0; }

int arm(Path path, int row, int col) {
  check_bit(row, "row");
  check_bit(col, "col");
  return 1 + 4 * static_cast<int>(path) + 2 * row + col;
}

int loop(int a1, int a2) {
  check_bit(a1, "a1");
  check_bit(a2, "a2");
  return 9 + 2 * a1 + a2;
}

int dump(int a1, int a2) { return loop(a1, a2) + 4; }

int detector(int a1, int a2, int port) {
  check_bit(port, "port");
  return 17 + 2 * (2 * a1 + a2) + port;
}

std::string label(int mode) {
  if (mode < 0 || mode >= kCount) throw std::out_of_range("mode index out of range");
  if (mode == 0) return "in";
  if (mode < 9) {
    const int m = mode - 1;
    return std::string(m < 4 ? "R" : "U") + "[" + bits((m >> 1) & 1, m & 1) + "]";
  }
  if (mode < 13) return "loop(" + bits((mode - 9) >> 1, (mode - 9) & 1) + ")";
  if (mode < 17) return "dump(" + bits((mode - 13) >> 1, (mode - 13) & 1) + ")";
  const int m = mode - 17;
  return "det(" + bits(m >> 2, (m >> 1) & 1) + ";" + std::to_string(m & 1) + ")";
}

}  // namespace modes

ModeState ModeState::single(int mode, Pol pol) {
  ModeState s;
  s.at(mode, pol) = 1.0;
  return s;
}

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::HWP: return "HWP";
    case ElementKind::QWP: return "QWP";
    case ElementKind::EOM: return "EOM";
    case ElementKind::PBS: return "PBS";
    case ElementKind::BD: return "BD";
  }
  return "?";
}

Jones jones_matrix(const OpticalElement& element) {
  switch (element.kind) {
    case ElementKind::HWP: return hwp(element.angle);
    case ElementKind::QWP: return qwp(element.angle);
    case ElementKind::EOM: return eom(element.angle);
    case ElementKind::PBS:
    case ElementKind::BD: return Jones::Identity();
  }
  return Jones::Identity();
}

void validate_routes(const OpticalElement& element) {
  std::set<std::pair<int, int>> sources;
  std::set<std::pair<int, int>> targets;
  for (const Route& r : element.routes) {
    const int pol = static_cast<int>(r.pol);
    if (!sources.insert({r.from, pol}).second) {
      throw std::invalid_argument(element.label + ": duplicate route source");
    }
    if (!targets.insert({r.to, pol}).second) {
      throw std::invalid_argument(element.label + ": two routes share a target");
    }
  }
  // A target that is not itself moved away would collide with light that stays.
  for (const auto& t : targets) {
    const bool is_source = sources.count(t) > 0;
    const bool touched_mode = std::find(element.acts_on.begin(), element.acts_on.end(), t.first) !=
                              element.acts_on.end();
    if (touched_mode && !is_source) {
      throw std::invalid_argument(element.label + ": route target overlaps a staying beam");
    }
  }
}

void OpticalElement::apply(ModeState& state) const {
  switch (kind) {
    case ElementKind::HWP:
    case ElementKind::QWP:
    case ElementKind::EOM: {
      const Jones j = jones_matrix(*this);
      for (int m : acts_on) {
        Eigen::Vector2cd v(state.at(m, Pol::H), state.at(m, Pol::V));
        v = j * v;
        state.at(m, Pol::H) = v(0);
        state.at(m, Pol::V) = v(1);
      }
      return;
    }
    case ElementKind::PBS:
    case ElementKind::BD: {
      ModeState moved;
      for (const Route& r : routes) {
        moved.at(r.to, r.pol) += state.at(r.from, r.pol);
        state.at(r.from, r.pol) = 0.0;
      }
      state.amplitudes() += moved.amplitudes();
      return;
    }
  }
}

Matrix sequence_matrix(std::span<const OpticalElement> elements) {
  const int n = 2 * modes::kCount;
  Matrix m(n, n);
  for (int col = 0; col < n; ++col) {
    ModeState s;
    s.amplitudes()(col) = 1.0;
    for (const auto& e : elements) e.apply(s);
    m.col(col) = s.amplitudes();
  }
  return m;
}

// ---------------------------------------------------------------------------
// Network

std::vector<int> SwitchNetwork::terminal_loops() const {
  std::set<int> out;
  for (const auto& e : elements_)
    for (const Route& r : e.routes)
      if (r.to >= modes::loop(0, 0) && r.to <= modes::loop(1, 1)) out.insert(r.to);
  return {out.begin(), out.end()};
}

ModeState SwitchNetwork::propagate(ModeState state) const {
  for (const auto& e : elements_) e.apply(state);
  return state;
}

Matrix SwitchNetwork::transfer() const {
  Matrix m(2 * modes::kCount, 2);
  m.col(0) = propagate(ModeState::single(modes::input(), Pol::H)).amplitudes();
  m.col(1) = propagate(ModeState::single(modes::input(), Pol::V)).amplitudes();
  return m;
}

SwitchNetwork build_switch_network(int x1, int x2, const NetworkOptions& options) {
  check_bit(x1, "x1");
  check_bit(x2, "x2");
  using modes::arm;
  std::vector<OpticalElement> el;

  // Input PBS: H transmitted into R, V reflected into U.
  el.push_back(router(ElementKind::PBS, "input.PBS", "",
                      {{modes::input(), Pol::H, arm(Path::R, 0, 0)},
                       {modes::input(), Pol::V, arm(Path::U, 0, 0)}}));
  // Target initialization to |H> in both arms.
  el.push_back(waveplate(ElementKind::HWP, "init.R", 0.0, arm(Path::R, 0, 0)));
  el.push_back(waveplate(ElementKind::HWP, "init.U", kDeg45, arm(Path::U, 0, 0)));

  // Alice 1's BD leaves H (a1 = 0) and moves V down (a1 = 1).
  auto alice1_bd = [&](Path p, std::vector<int> cols) {
    std::vector<Route> routes;
    for (int col : cols) routes.push_back({arm(p, 0, col), Pol::V, arm(p, 1, col)});
    el.push_back(router(ElementKind::BD, std::string("A1.BD.") + (p == Path::R ? "R" : "U"),
                        "down", std::move(routes)));
  };
  // Alice 2's BD leaves V (a2 = 1) and moves H left (a2 = 0).
  auto alice2_bd = [&](Path p, std::vector<int> rows) {
    std::vector<Route> routes;
    for (int row : rows) routes.push_back({arm(p, row, 0), Pol::H, arm(p, row, 1)});
    el.push_back(router(ElementKind::BD, std::string("A2.BD.") + (p == Path::R ? "R" : "U"),
                        "left", std::move(routes)));
  };
  // After a BD the beam polarization equals the outcome, so a HWP at 0 or
  // 45 degrees leaves it in |x>.
  auto reprep = [&](const std::string& who, Path p, int row, int col, int outcome, int x) {
    el.push_back(waveplate(ElementKind::HWP,
                           who + ".reprep." + (p == Path::R ? "R" : "U") + "[" + bits(row, col) + "]",
                           kDeg45 * (outcome ^ x) + options.reprep_angle_offset, arm(p, row, col)));
  };

  // R: Alice 1 then Alice 2.
  alice1_bd(Path::R, {0});
  for (int row = 0; row < 2; ++row) reprep("A1", Path::R, row, 0, row, x1);
  alice2_bd(Path::R, {0, 1});
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) reprep("A2", Path::R, row, col, 1 - col, x2);

  // U: Alice 2 then Alice 1.
  alice2_bd(Path::U, {0});
  for (int col = 0; col < 2; ++col) reprep("A2", Path::U, 0, col, 1 - col, x2);
  alice1_bd(Path::U, {0, 1});
  for (int row = 0; row < 2; ++row)
    for (int col = 0; col < 2; ++col) reprep("A1", Path::U, row, col, row, x1);

  // Recombination: R beams carry |x2>, U beams carry |x1>. Rotate R to H and
  // U to V, then merge on a PBS so that polarization carries the control.
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      const int r = arm(Path::R, a1, 1 - a2);
      const int u = arm(Path::U, a1, 1 - a2);
      const std::string tag = "(" + bits(a1, a2) + ")";
      el.push_back(waveplate(ElementKind::HWP, "rec.R" + tag, kDeg45 * x2, r));
      el.push_back(waveplate(ElementKind::HWP, "rec.U" + tag, kDeg45 * (1 - x1), u));
      el.push_back(router(ElementKind::PBS, "rec.PBS" + tag, "",
                          {{r, Pol::H, modes::loop(a1, a2)},
                           {u, Pol::V, modes::loop(a1, a2)},
                           {r, Pol::V, modes::dump(a1, a2)},
                           {u, Pol::H, modes::dump(a1, a2)}}));
    }
  }
  return SwitchNetwork(x1, x2, std::move(el));
}

std::vector<OpticalElement> charlie_stage(double bloch_theta) {
  const double theta = rotation_angle_for_bloch(bloch_theta);
  std::vector<OpticalElement> el;
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      const int loop = modes::loop(a1, a2);
      const std::string tag = "(" + bits(a1, a2) + ")";
      el.push_back(waveplate(ElementKind::QWP, "charlie.QWP0" + tag, 0.0, loop));
      el.push_back(waveplate(ElementKind::EOM, "charlie.EOM" + tag, 2 * theta, loop));
      el.push_back(waveplate(ElementKind::QWP, "charlie.QWP90" + tag, kDeg90, loop));
      el.push_back(router(ElementKind::PBS, "charlie.PBS" + tag, "",
                          {{loop, Pol::H, modes::detector(a1, a2, 0)},
                           {loop, Pol::V, modes::detector(a1, a2, 1)}}));
    }
  }
  return el;
}

OutcomeRow probabilities_from_transfer(const LinearOperator& bc_state, const Matrix& transfer,
                                       int y, const MeasurementBases& bases) {
  check_bit(y, "y");
  if (bc_state.dims() != std::vector<int>{2, 2}) {
    throw std::invalid_argument("probabilities_from_transfer: expected a B ⊗ C state");
  }
  const Matrix id_b = Matrix::Identity(2, 2);
  OutcomeRow row{};
  for (int a1 = 0; a1 < 2; ++a1) {
    for (int a2 = 0; a2 < 2; ++a2) {
      for (int c = 0; c < 2; ++c) {
        const int det = modes::detector(a1, a2, c);
        // Rows of the transfer landing in this detector, both polarizations.
        Matrix f(2, 2);
        f.row(0) = transfer.row(2 * det);
        f.row(1) = transfer.row(2 * det + 1);
        const Matrix a = Eigen::kroneckerProduct(id_b, f).eval();
        const Matrix out = a * bc_state.matrix() * a.adjoint();
        const LinearOperator out_op(out, {2, 2});
        for (int b = 0; b < 2; ++b) {
          const LinearOperator effect =
              tensor_product(bloch_projector(bases.bob[y], b).op, LinearOperator::identity({2}));
          row[Outcome{a1, a2, b, c}.index()] = born_probability(out_op, effect);
        }
      }
    }
  }
  return row;
}

OutcomeRow simulate_network(const LinearOperator& bc_state, const Setting& setting,
                            const MeasurementBases& bases, const NetworkOptions& options) {
  setting.validate();
  validate_density(bc_state);
  std::vector<OpticalElement> elements =
      build_switch_network(setting.x1, setting.x2, options).elements();
  const auto charlie = charlie_stage(bases.charlie[setting.z]);
  elements.insert(elements.end(), charlie.begin(), charlie.end());
  const SwitchNetwork full(setting.x1, setting.x2, std::move(elements));
  return probabilities_from_transfer(bc_state, full.transfer(), setting.y, bases);
}

CorrelationTable simulate_table(const LinearOperator& bc_state, const MeasurementBases& bases,
                                const NetworkOptions& options) {
  CorrelationTable t;
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting set = Setting::from_index(s);
    t.set_row(set, simulate_network(bc_state, set, bases, options));
  }
  return t;
}

nlohmann::json network_to_json(const SwitchNetwork& network) {
  nlohmann::json j;
  j["x1"] = network.x1();
  j["x2"] = network.x2();
  nlohmann::json labels = nlohmann::json::array();
  for (int m = 0; m < modes::kCount; ++m) labels.push_back(modes::label(m));
  j["modes"] = std::move(labels);
  nlohmann::json elements = nlohmann::json::array();
  for (const auto& e : network.elements()) {
    nlohmann::json je;
    je["kind"] = to_string(e.kind);
    je["label"] = e.label;
    if (e.routes.empty()) {
      je["angle_deg"] = round_sig12(e.angle * 180.0 / std::numbers::pi);
      nlohmann::json on = nlohmann::json::array();
      for (int m : e.acts_on) on.push_back(modes::label(m));
      je["acts_on"] = std::move(on);
    } else {
      if (!e.direction.empty()) je["direction"] = e.direction;
      nlohmann::json routes = nlohmann::json::array();
      for (const Route& r : e.routes) {
        routes.push_back({{"from", modes::label(r.from)},
                          {"pol", r.pol == Pol::H ? "H" : "V"},
                          {"to", modes::label(r.to)}});
      }
      je["routes"] = std::move(routes);
    }
    elements.push_back(std::move(je));
  }
  j["elements"] = std::move(elements);
  return j;
}

}  // namespace qswitch::optics
