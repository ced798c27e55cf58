#pragma once

// Differentiable ensemble objectives used by the optimizers.
//
// An ensemble is parameterised by unnormalised complex vectors ("blocks")
// and unconstrained weight logits. Each component state is a block, or a
// product of an X block and a Y block reordered into the canonical layout.
// Objectives are weighted sums of Holevo quantities and entropies of linear
// images of those states. Gradients are returned with respect to the raw
// real parameters; complex entries are stored as (re, im) pairs.

#include <span>
#include <string>
#include <vector>

#include "biduct/channels.hpp"
#include "biduct/holevo.hpp"

namespace biduct {

/// psi -> sum_j V_j psi psi^dagger V_j^dagger: optionally a two-way channel
/// on (label_a, label_b), followed by the partial trace onto `keep`.
class PureStateMap {
 public:
  PureStateMap(const SubsystemLayout& in, const TwoWayChannel* channel, const std::string& label_a,
               const std::string& label_b, std::vector<std::string> keep);

  int in_dim() const noexcept { return static_cast<int>(stacked_.cols()); }
  int out_dim() const noexcept { return out_dim_; }
  Matrix apply(const Vector& psi) const;
  Matrix apply_density(const Matrix& rho) const;
  /// sum_j V_j^dagger g V_j psi
  Vector adjoint_apply(const Matrix& g, const Vector& psi) const;

 private:
  Matrix stacked_;  // rows (j, out) stacked, out fastest
  int out_dim_ = 1;
  int count_ = 0;
};

enum class WeightScheme {
  Joint,    // softmax over all components
  Product,  // component (a, b) gets p_a q_b
};

struct ComponentSpec {
  int member = 0;
  int x_block = 0;
  int y_block = -1;  // -1: the X block spans the whole layout
};

struct EnsembleStructure {
  SubsystemLayout layout;
  /// X labels followed by Y labels is the order blocks are tensored in.
  std::vector<std::string> x_labels;
  std::vector<std::string> y_labels;
  std::vector<int> block_dims;
  std::vector<ComponentSpec> components;
  int members = 1;
  WeightScheme weights = WeightScheme::Joint;
  int product_x = 0;  // Product scheme: components ordered a * product_y + b
  int product_y = 0;
  /// When set, the component states are fixed and only weights vary.
  std::vector<Vector> fixed_states;
};

struct ObjectiveTerm {
  enum class Kind { Holevo, Entropy };
  Kind kind;
  double coefficient;
  PureStateMap map;
};

class EnsembleObjective {
 public:
  EnsembleObjective(EnsembleStructure structure, std::vector<ObjectiveTerm> terms);

  int num_parameters() const noexcept { return num_parameters_; }
  int weight_parameters() const noexcept { return weight_params_; }
  const EnsembleStructure& structure() const noexcept { return s_; }

  /// Objective value with every operator X replaced by
  /// (1 - eps) X + eps tr(X) I / d before its entropy is taken. Writes the
  /// gradient when `grad` is non-null.
  double evaluate(const double* x, double* grad, double eps) const;

  /// The ensemble encoded by `x`.
  Ensemble certificate(const double* x) const;
  /// Unregularised objective value of an arbitrary ensemble on the layout.
  double value_of(const Ensemble& e) const;

  /// Parameter vector from weight logits and block vectors (unnormalised
  /// blocks are fine). `blocks` is ignored for fixed-state structures.
  std::vector<double> pack(std::span<const double> logits, std::span<const Vector> blocks) const;
  /// Reorders a canonical-layout vector into X-then-Y factor order.
  Vector canonical_to_xy(const Vector& v) const;

 private:
  struct Decoded;
  Decoded decode(const double* x) const;

  EnsembleStructure s_;
  std::vector<ObjectiveTerm> terms_;
  std::vector<std::size_t> to_canonical_;  // canonical[i] = xy[table[i]]
  std::vector<int> block_offset_;
  int weight_params_ = 0;
  int num_parameters_ = 0;
};

/// -tr X log2 X of a Hermitian matrix and the matrix F with
/// d/dt f(X + tY) = tr(F Y), after the eps regularisation.
double regularized_entropy(const Matrix& x, double eps, Matrix* gradient);

}  // namespace biduct
