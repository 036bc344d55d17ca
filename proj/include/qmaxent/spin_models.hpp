#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qmaxent/operator_core.hpp"

namespace qmaxent {

struct parse_error : std::runtime_error {
  parse_error(int line_number, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
        line(line_number) {}
  int line;
};

enum class Pauli { X, Y, Z };

struct PauliString {
  double coefficient = 0.0;
  std::map<int, Pauli> factors;  // empty map is an identity term
};

struct PauliSumHamiltonian {
  SiteStructure structure;  // qubits
  std::vector<PauliString> terms;

  /// sum |coefficient|, an upper bound on the spectral norm.
  double coefficient_norm() const;
  void validate() const;
};

enum class Boundary { Open, Periodic };

struct IsingParams {
  int n = 2;
  double coupling = 1.0;  // J > 0
  double lambda_x = 0.0;
  double lambda_z = 0.0;
  Boundary boundary = Boundary::Open;
};

/// -J (sum Z_i Z_{i+1} + lambda_x sum X_i + lambda_z sum Z_i); periodic
/// boundaries add the wrap-around ZZ bond.
PauliSumHamiltonian build_ising(const IsingParams& params);

/// out = H * in, matrix-free via bit manipulation.
void apply(const PauliSumHamiltonian& h, const CVector& in, CVector& out);
CVector apply(const PauliSumHamiltonian& h, const CVector& in);

/// Dense matrix of the Hamiltonian (guarded to n <= 14).
Matrix dense_matrix(const PauliSumHamiltonian& h);

struct LanczosOptions {
  double tol = 1e-8;          // residual relative to the coefficient norm
  int max_iter = 2000;
  std::uint64_t seed = 42;
  bool z2_symmetric_start = false;  // project the start into the X^(x)n even sector
};

struct LanczosResult {
  double energy;
  PureState state;
  int iterations;
};

/// Lanczos with full reorthogonalization and restarts from the best Ritz
/// vector. Throws no_convergence_error after max_iter matvecs.
LanczosResult ground_state_lanczos(const PauliSumHamiltonian& h, const LanczosOptions& opts = {});

struct GroundSpace {
  double energy = 0.0;
  std::vector<PureState> basis;  // orthonormal
  int degeneracy = 0;
};

/// All eigenvectors within degeneracy_tol * spectral range of the minimum.
GroundSpace ground_space_dense(const PauliSumHamiltonian& h, double degeneracy_tol = 1e-8);
GroundSpace ground_space_of_matrix(const Matrix& h, double degeneracy_tol = 1e-8);

/// Line format: "coeff OP<site> [OP<site> ...]" with OP in {X,Y,Z}; '#'
/// starts a comment, blank lines are skipped. n_sites -1 infers the count
/// from the largest index.
PauliSumHamiltonian parse_pauli_string(const std::string& text, int n_sites = -1);

std::string format_pauli_sum(const PauliSumHamiltonian& h);

}  // namespace qmaxent
