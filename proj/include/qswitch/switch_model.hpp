// switch_model.hpp: quantum switch with entangled control and
// measure-and-reprepare instruments.
//
// The switch acts on C ⊗ T. Control |0> means Alice 1 acts before Alice 2,
// control |1> the reverse. Alice i measures T in the computational basis
// (outcome a_i) and re-prepares |x_i>. Outcomes are computed from branch
// operators S_{a1 a2}, so the two orders stay coherent until Charlie measures.

#pragma once

#include "qswitch/correlation.hpp"
#include "qswitch/linalg.hpp"

#include <array>
#include <numbers>

namespace qswitch {

/// Measurement directions in the XZ plane of the Bloch sphere (radians from
/// +Z toward +X), indexed by setting bit.
struct MeasurementBases {
  std::array<double, 2> bob{0.0, std::numbers::pi / 2};                          // Z, X
  std::array<double, 2> charlie{std::numbers::pi / 4, -std::numbers::pi / 4};   // Z+X, Z-X
};

/// |x><a| on the target.
LinearOperator measure_reprepare_kraus(int x, int a);

/// |0><0|_C ⊗ K2 K1 + |1><1|_C ⊗ K1 K2 on C ⊗ T.
LinearOperator switch_branch_operator(int x1, int x2, int a1, int a2);

/// Unnormalized B ⊗ C ⊗ T states S rho S^dagger (rho = bc ⊗ |0><0|_T),
/// indexed by 2*a1 + a2.
using BranchStates = std::array<LinearOperator, 4>;
BranchStates post_switch_branches(const LinearOperator& bc_state, int x1, int x2);

/// Branch states with the target traced out (B ⊗ C).
using ReducedBranches = std::array<LinearOperator, 4>;
ReducedBranches discard_target(const BranchStates& branches);

/// Applies Bob's and Charlie's projectors to branch states.
OutcomeRow measure_branches(const BranchStates& branches, int y, int z,
                            const MeasurementBases& bases = {});
OutcomeRow measure_reduced(const ReducedBranches& reduced, int y, int z,
                           const MeasurementBases& bases = {});

/// p(a1 a2 b c | setting) for a two-qubit B ⊗ C density operator. Throws
/// std::invalid_argument for an invalid state.
OutcomeRow joint_distribution(const LinearOperator& bc_state, const Setting& setting,
                              const MeasurementBases& bases = {});

CorrelationTable full_table(const LinearOperator& bc_state, const MeasurementBases& bases = {});

/// Sends the first party's roles to the second: (x1, a1) <-> (x2, a2)
/// together with X on the control. Used for the order-relabeling symmetry.
CorrelationTable swap_alices(const CorrelationTable& table);

}  // namespace qswitch
