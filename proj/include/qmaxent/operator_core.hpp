#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace qmaxent {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Numeric conventions used throughout: entropies are reported in bits unless
// a base is requested explicitly, and site 0 is the most significant tensor
// factor (basis index = sum_i digit_i * local_dim^(n-1-i)).
inline constexpr double kHermitianRepairTol = 1e-8;
inline constexpr double kDensityEigTol = 1e-10;
inline constexpr double kDensityTraceTol = 1e-10;
inline constexpr double kPureNormTol = 1e-12;
inline constexpr double kEntropyEigFloor = 1e-14;

struct infeasible_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct no_convergence_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct inconsistent_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SiteStructure {
  int n_sites = 0;
  int local_dim = 2;

  std::int64_t dim() const;
  void validate() const;
  bool operator==(const SiteStructure&) const = default;
};

/// Dense complex Hermitian matrix. Construction symmetrizes (m + m^dag)/2 and
/// rejects inputs whose anti-Hermitian part exceeds kHermitianRepairTol
/// relative to the largest entry.
class HermitianOperator {
 public:
  explicit HermitianOperator(Matrix entries);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const Matrix& matrix() const { return mat_; }

 private:
  Matrix mat_;
};

/// Unit-trace positive semidefinite operator. Validates spectrum >= -1e-10
/// and trace 1 on construction.
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op);
  explicit DensityMatrix(Matrix entries) : DensityMatrix(HermitianOperator(std::move(entries))) {}
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return op_.dim(); }
  const Matrix& matrix() const { return op_.matrix(); }
  const HermitianOperator& op() const { return op_; }

 private:
  HermitianOperator op_;
};

class PureState {
 public:
  explicit PureState(CVector amplitudes);
  static PureState normalized(CVector amplitudes);

  int dim() const { return static_cast<int>(amp_.size()); }
  const CVector& amplitudes() const { return amp_; }
  DensityMatrix to_density() const;

 private:
  CVector amp_;
};

struct EighResult {
  RVector eigenvalues;  // ascending
  Matrix eigenvectors;  // orthonormal columns
};

enum class EntropyBase { Bits, Nats };

/// op tensor identity on the remaining sites; `sites` lists the factors of
/// `op` in order (first listed site carries the most significant digit).
HermitianOperator embed_local(const HermitianOperator& op, const std::vector<int>& sites,
                              const SiteStructure& structure);

/// Reduced state on `keep` (output sites ordered ascending). An empty keep
/// set degenerates to the 1x1 matrix [tr rho].
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep,
                            const SiteStructure& structure);
Matrix partial_trace_matrix(const Matrix& rho, const std::vector<int>& keep,
                            const SiteStructure& structure);

/// RDM of a pure state without forming the global density matrix.
Matrix reduced_density(const PureState& psi, const std::vector<int>& keep,
                       const SiteStructure& structure);

EighResult eigh(const HermitianOperator& op);
EighResult eigh_matrix(const Matrix& hermitian);

double entropy_of_spectrum(const RVector& eigenvalues, EntropyBase base = EntropyBase::Bits);
double von_neumann_entropy(const DensityMatrix& rho, EntropyBase base = EntropyBase::Bits);
double entropy_of_matrix(const Matrix& rho, EntropyBase base = EntropyBase::Bits);

HermitianOperator matrix_exp_hermitian(const HermitianOperator& op);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double trace_distance_matrix(const Matrix& a, const Matrix& b);

double expectation(const DensityMatrix& rho, const HermitianOperator& op);
double expectation(const PureState& psi, const HermitianOperator& op);

/// tr(a * b) without forming the product.
Complex trace_product(const Matrix& a, const Matrix& b);

/// Fixes the global phase so the largest-magnitude amplitude is real
/// positive; `anchor` overrides the amplitude used when >= 0.
CVector phase_fixed(const CVector& v, int anchor = -1);

}  // namespace qmaxent
