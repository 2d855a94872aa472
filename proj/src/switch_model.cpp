#include "qswitch/switch_model.hpp"

#include <stdexcept>

namespace qswitch {

namespace {

void check_bit(int v, const char* name) {
  if (v != 0 && v != 1) throw std::invalid_argument(std::string(name) + " must be 0 or 1");
}

const LinearOperator& target_zero() {
  static const LinearOperator op = basis_operator(2, 0, 0);
  return op;
}

}  // namespace

LinearOperator measure_reprepare_kraus(int x, int a) {
  check_bit(x, "x");
  check_bit(a, "a");
  return basis_operator(2, x, a);
}

LinearOperator switch_branch_operator(int x1, int x2, int a1, int a2) {
  const LinearOperator k1 = measure_reprepare_kraus(x1, a1);
  const LinearOperator k2 = measure_reprepare_kraus(x2, a2);
  return tensor_product(basis_operator(2, 0, 0), k2 * k1) +
         tensor_product(basis_operator(2, 1, 1), k1 * k2);
}

BranchStates post_switch_branches(const LinearOperator& bc_state, int x1, int x2) {
  if (bc_state.dims() != std::vector<int>{2, 2}) {
    throw std::invalid_argument("post_switch_branches: expected a two-qubit B ⊗ C state");
  }
  const LinearOperator input = tensor_product(bc_state, target_zero());
  const LinearOperator bob_id = LinearOperator::identity({2});
  auto branch = [&](int a1, int a2) {
    const LinearOperator s = tensor_product(bob_id, switch_branch_operator(x1, x2, a1, a2));
    return s * input * s.adjoint();
  };
  return {branch(0, 0), branch(0, 1), branch(1, 0), branch(1, 1)};
}

ReducedBranches discard_target(const BranchStates& branches) {
  return {partial_trace(branches[0], {kBob, kControl}), partial_trace(branches[1], {kBob, kControl}),
          partial_trace(branches[2], {kBob, kControl}), partial_trace(branches[3], {kBob, kControl})};
}

OutcomeRow measure_reduced(const ReducedBranches& reduced, int y, int z,
                           const MeasurementBases& bases) {
  check_bit(y, "y");
  check_bit(z, "z");
  OutcomeRow row{};
  for (int b = 0; b < 2; ++b) {
    for (int c = 0; c < 2; ++c) {
      const LinearOperator effect = tensor_product(bloch_projector(bases.bob[y], b).op,
                                                   bloch_projector(bases.charlie[z], c).op);
      for (int a = 0; a < 4; ++a) {
        row[Outcome{a >> 1, a & 1, b, c}.index()] = born_probability(reduced[a], effect);
      }
    }
  }
  return row;
}

OutcomeRow measure_branches(const BranchStates& branches, int y, int z,
                            const MeasurementBases& bases) {
  return measure_reduced(discard_target(branches), y, z, bases);
}

OutcomeRow joint_distribution(const LinearOperator& bc_state, const Setting& setting,
                              const MeasurementBases& bases) {
  setting.validate();
  validate_density(bc_state);
  return measure_branches(post_switch_branches(bc_state, setting.x1, setting.x2), setting.y,
                          setting.z, bases);
}

CorrelationTable full_table(const LinearOperator& bc_state, const MeasurementBases& bases) {
  validate_density(bc_state);
  CorrelationTable table;
  for (int x = 0; x < 4; ++x) {
    const ReducedBranches reduced = discard_target(post_switch_branches(bc_state, x >> 1, x & 1));
    for (int yz = 0; yz < 4; ++yz) {
      const Setting s{x >> 1, x & 1, yz >> 1, yz & 1};
      table.set_row(s, measure_reduced(reduced, s.y, s.z, bases));
    }
  }
  return table;
}

CorrelationTable swap_alices(const CorrelationTable& table) {
  CorrelationTable out;
  for (int s = 0; s < kNumSettings; ++s) {
    const Setting in = Setting::from_index(s);
    const Setting swapped{in.x2, in.x1, in.y, in.z};
    for (int o = 0; o < kNumOutcomes; ++o) {
      const Outcome res = Outcome::from_index(o);
      out.at(swapped, Outcome{res.a2, res.a1, res.b, res.c}) = table.at(in, res);
    }
  }
  return out;
}

}  // namespace qswitch
