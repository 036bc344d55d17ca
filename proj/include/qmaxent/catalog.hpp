#pragma once

#include "qmaxent/discontinuity.hpp"
#include "qmaxent/maxent.hpp"
#include "qmaxent/spin_models.hpp"

// Built-in problem catalog: the observable sets, Hamiltonians and paths the
// `reproduce` tool and the acceptance suite exercise. Identifiers match the
// CLI catalog ids documented in the README.

namespace qmaxent::catalog {

/// Two non-commuting 3x3 observables whose attainable set has a corner
/// hosting a rank-two ground space mapped to the single point (1, 1).
ObservableSet ex1_observables();

/// Variant where the rank-two ground space maps to the segment (1, [0, 1]).
ObservableSet ex2_observables();

/// A commuting pair; the attainable set is the triangle with vertices
/// (1,1), (1,0), (-1,-1).
ObservableSet ex3_observables();

/// ex1's pair extended by a third operator; the corner stretches into the
/// segment (1, 1, [0, 1]) of a three-dimensional convex body.
ObservableSet ex6_observables();

/// ex6 extended by a fourth operator that pins the real off-diagonal moment
/// on the degenerate ground space.
ObservableSet ex7_observables();

/// n-qubit GHZ state (|0..0> + |1..1>)/sqrt(2).
PureState ghz_state(int n);

/// The three-observable family (Z1 Z2 + Z2 Z3, sum X_i, sum Z_i) on 3 qubits.
ObservableSet ghz_local_observables();

/// All one- and two-site trace-orthonormal Pauli products on n qubits.
ObservableSet two_local_pauli_set(int n);

/// Index of the normalized product with the given site -> Pauli factors in
/// two_local_pauli_set(n).
int two_local_index(int n, const std::map<int, Pauli>& factors);

/// H0 coefficients of -(Z0 Z1 + Z1 Z2) over two_local_pauli_set(3).
RVector ghz_h0_coeffs();

/// Perturbation direction of sign * sum X_i (or Z_i) over the same set.
RVector ghz_field_direction(Pauli axis, double sign);

PathSpec ghz_x_path(double sign);  // H0 + sign * eps * sum X_i
PathSpec ghz_z_path(double sign);

/// Symmetric two-site coupling whose three-qubit chain sum has a two-fold
/// degenerate ground space spanned by W-like states.
HermitianOperator ex8_pair_term();
PauliSumHamiltonian ex8_hamiltonian();
PureState ex8_ground_basis_0();
PureState ex8_ground_basis_1();

/// Maximally mixed state on the ex8 ground space.
DensityMatrix ex8_ground_mixture();

}  // namespace qmaxent::catalog
