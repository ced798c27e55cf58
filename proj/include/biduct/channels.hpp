#pragma once

// Two-way and one-way quantum channels in Kraus form.
//
// A two-way channel maps A_in (x) B_in to A_out (x) B_out. One-way channels
// are the special case b_in = a_out = 1; those trivial terminals are kept as
// dimension-1 subsystems so that the bookkeeping stays uniform.

#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "biduct/classical_channel.hpp"
#include "biduct/qcore.hpp"

namespace biduct {

struct ChannelDims {
  int a_in = 1;
  int b_in = 1;
  int a_out = 1;
  int b_out = 1;

  int in() const noexcept { return a_in * b_in; }
  int out() const noexcept { return a_out * b_out; }
  bool operator==(const ChannelDims&) const = default;
};

/// Choi operator sum_ij |i><j| (x) N(|i><j|) on input (x) output, trace d_in.
class ChoiMatrix {
 public:
  ChoiMatrix(Matrix matrix, int d_in, int d_out);

  const Matrix& matrix() const noexcept { return matrix_; }
  int d_in() const noexcept { return d_in_; }
  int d_out() const noexcept { return d_out_; }
  /// Transpose on the output factor.
  Matrix partial_transpose_output() const;

 private:
  Matrix matrix_;
  int d_in_;
  int d_out_;
};

namespace detail {
struct ChoiCache {
  std::once_flag once;
  std::unique_ptr<ChoiMatrix> value;
};
ChoiMatrix choi_from_kraus(const std::vector<Matrix>& kraus, int d_in, int d_out);
double completeness_deviation(const std::vector<Matrix>& kraus, int d_in);
}  // namespace detail

class TwoWayChannel {
 public:
  /// Validates shapes (InputError) and completeness within
  /// tol::kKrausCompleteness (InvariantError).
  TwoWayChannel(std::vector<Matrix> kraus, ChannelDims dims);
  static TwoWayChannel from_unitary(const Matrix& u, ChannelDims dims);

  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  const ChannelDims& dims() const noexcept { return dims_; }
  double completeness_deviation() const;
  /// Computed on first use and shared between copies.
  const ChoiMatrix& choi() const;

 private:
  std::vector<Matrix> kraus_;
  ChannelDims dims_;
  std::shared_ptr<detail::ChoiCache> choi_;
};

class OneWayChannel {
 public:
  OneWayChannel(std::vector<Matrix> kraus, int d_in, int d_out);
  static OneWayChannel from_unitary(const Matrix& u);

  const std::vector<Matrix>& kraus() const noexcept { return kraus_; }
  int d_in() const noexcept { return d_in_; }
  int d_out() const noexcept { return d_out_; }
  double completeness_deviation() const;
  const ChoiMatrix& choi() const;
  /// Raw action on a d_in x d_in matrix.
  Matrix map(const Matrix& rho) const;

 private:
  std::vector<Matrix> kraus_;
  int d_in_;
  int d_out_;
  std::shared_ptr<detail::ChoiCache> choi_;
};

/// N (x) id on the labels `label_a`, `label_b`; every other subsystem is a
/// spectator. The output keeps the input's label order with the two channel
/// labels resized to the output dimensions.
DensityOperator apply(const TwoWayChannel& n, const DensityOperator& rho,
                      const std::string& label_a = "A", const std::string& label_b = "B");

/// M (x) id on `label`, which is resized to the output dimension.
DensityOperator apply(const OneWayChannel& m, const DensityOperator& rho, const std::string& label);

/// Raw Kraus action on a matrix whose leading factor is the channel input.
Matrix apply_kraus_leading(const std::vector<Matrix>& kraus, const Matrix& rho, int d_in);

/// Composite channel with Alice input A1 A2 and Bob input B1 B2.
TwoWayChannel tensor_channels(const TwoWayChannel& n1, const TwoWayChannel& n2);
OneWayChannel tensor_channels(const OneWayChannel& m1, const OneWayChannel& m2);

/// Two-way channel with b_in = 1 and a_out = 1 reproducing M from A to B.
TwoWayChannel embed_one_way(const OneWayChannel& m);

/// Kraus set {sqrt p(a'b'|ab) |a'b'><ab|} over all tuples with p > 0.
TwoWayChannel embed_classical(const ClassicalTwoWayChannel& w);

enum class EbVerdict { EntanglementBreaking, NotEntanglementBreaking, Inconclusive };

const char* to_string(EbVerdict v);

struct EbReport {
  EbVerdict verdict;
  double min_partial_transpose_eigenvalue;
};

/// PPT test on the Choi matrix. PPT is treated as separability only when
/// d_in * d_out <= 6; larger PPT channels are reported as Inconclusive.
EbReport entanglement_breaking_report(const OneWayChannel& m);
EbVerdict is_entanglement_breaking(const OneWayChannel& m);

}  // namespace biduct
