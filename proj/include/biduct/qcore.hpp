#pragma once

// States, subsystem bookkeeping, entropies and distances.
//
// Every multipartite object carries an explicit SubsystemLayout. Kronecker
// products use the usual row-major convention: the first label is the most
// significant index. Nothing in this library reorders subsystems implicitly;
// use permute() when a different order is needed.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace biduct {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class Party { Alice, Bob };

const char* to_string(Party p);
Party party_from_string(const std::string& s);

struct Subsystem {
  std::string label;
  int dim = 1;
  Party party = Party::Alice;

  bool operator==(const Subsystem&) const = default;
};

class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<Subsystem> systems);

  std::size_t size() const noexcept { return systems_.size(); }
  bool empty() const noexcept { return systems_.empty(); }
  const Subsystem& operator[](std::size_t i) const { return systems_[i]; }
  const std::vector<Subsystem>& systems() const noexcept { return systems_; }
  auto begin() const noexcept { return systems_.begin(); }
  auto end() const noexcept { return systems_.end(); }

  int total_dim() const noexcept;
  std::vector<int> dims() const;
  std::vector<std::string> labels() const;
  std::vector<std::string> labels_of(Party p) const;

  std::optional<std::size_t> find(const std::string& label) const;
  /// Index of `label`; throws InputError if absent.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const { return find(label).has_value(); }

  /// Layout with `other` appended. Throws InputError on a label collision.
  SubsystemLayout concat(const SubsystemLayout& other) const;
  /// Subsystems in the order given by `labels`.
  SubsystemLayout reordered(std::span<const std::string> labels) const;
  /// Copy with the dimension of `label` replaced.
  SubsystemLayout with_dim(const std::string& label, int dim) const;

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<Subsystem> systems_;
};

/// Gather table for reordering the tensor factors of a vector.
///
/// With `order[k]` naming which input factor lands at output position k,
/// `out[i] = in[table[i]]`.
std::vector<std::size_t> permutation_gather(std::span<const int> dims,
                                            std::span<const std::size_t> order);

class DensityOperator {
 public:
  /// Validates Hermiticity, unit trace and positivity; throws InvariantError.
  DensityOperator(Matrix matrix, SubsystemLayout layout);

  static DensityOperator maximally_mixed(SubsystemLayout layout);
  /// |i><i| for the computational basis index `index`.
  static DensityOperator basis(SubsystemLayout layout, std::size_t index);

  const Matrix& matrix() const noexcept { return matrix_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

 private:
  Matrix matrix_;
  SubsystemLayout layout_;
};

class PureState {
 public:
  PureState(Vector vector, SubsystemLayout layout);
  /// Normalises `vector` before validation.
  static PureState normalized(Vector vector, SubsystemLayout layout);

  const Vector& vector() const noexcept { return vector_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }
  DensityOperator density() const;

 private:
  Vector vector_;
  SubsystemLayout layout_;
};

/// Maximum absolute entry of M - M^dagger.
double hermiticity_deviation(const Matrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order.
RealVector hermitian_eigenvalues(const Matrix& m);

/// -sum lambda log2 lambda over the spectrum of a Hermitian matrix, with
/// eigenvalues <= tol::kEigenClamp contributing zero.
double entropy_of_hermitian(const Matrix& m);

DensityOperator tensor(const DensityOperator& x, const DensityOperator& y);
PureState tensor(const PureState& x, const PureState& y);

DensityOperator partial_trace(const DensityOperator& rho,
                              std::span<const std::string> keep);
DensityOperator partial_trace(const DensityOperator& rho,
                              std::initializer_list<std::string> keep);
/// Raw-matrix partial trace. Kept subsystems retain their relative order.
Matrix partial_trace_matrix(const Matrix& rho, const SubsystemLayout& layout,
                            std::span<const std::size_t> keep_indices);

DensityOperator permute(const DensityOperator& rho,
                        std::span<const std::string> order);
Vector permute_vector(const Vector& v, const SubsystemLayout& layout,
                      std::span<const std::string> order);

/// Reduction to the subsystems owned by one party.
DensityOperator reduce_to_party(const DensityOperator& rho, Party p);

double von_neumann_entropy(const DensityOperator& rho);
/// D(rho, sigma) = (1/2) ||rho - sigma||_1.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Throws InputError on negative entries or a sum off by more than
/// tol::kProbability.
void validate_probabilities(std::span<const double> p);
double shannon_entropy(std::span<const double> p);

/// U rho U^dagger on the subsystem `label`.
DensityOperator apply_local_unitary(const DensityOperator& rho, const Matrix& u,
                                    const std::string& label);

}  // namespace biduct
