#pragma once

// Ensembles, Holevo information and the local Holevo differences.

#include <string>
#include <vector>

#include "biduct/channels.hpp"
#include "biduct/json_io.hpp"
#include "biduct/qcore.hpp"

namespace biduct {

struct EnsembleMember {
  double p;
  DensityOperator state;
};

class Ensemble {
 public:
  /// All states must share one layout; probabilities are validated with
  /// validate_probabilities.
  explicit Ensemble(std::vector<EnsembleMember> members);
  static Ensemble from_pure(std::span<const double> p, std::span<const Vector> states,
                            const SubsystemLayout& layout);

  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  const SubsystemLayout& layout() const { return members_.front().state.layout(); }
  std::vector<double> probabilities() const;
  DensityOperator average() const;

 private:
  std::vector<EnsembleMember> members_;
};

double holevo_chi(const Ensemble& e);

/// Ensemble of reductions onto `keep`.
Ensemble reduce(const Ensemble& e, std::span<const std::string> keep);

/// chi of the ensemble reduced to Bob's (forward) or Alice's (backward)
/// subsystems. Throws InputError when that party owns no subsystem.
double chi_forward(const Ensemble& e);
double chi_backward(const Ensemble& e);

Ensemble apply_to_ensemble(const TwoWayChannel& n, const Ensemble& e,
                           const std::string& label_a = "A", const std::string& label_b = "B");

double delta_chi_forward(const TwoWayChannel& n, const Ensemble& e,
                         const std::string& label_a = "A", const std::string& label_b = "B");
double delta_chi_backward(const TwoWayChannel& n, const Ensemble& e,
                          const std::string& label_a = "A", const std::string& label_b = "B");

/// Ensemble indexed by a message pair (a, b). Alice keeps a copy of `a` in
/// the register "Am", Bob a copy of `b` in "Bm"; both are diagonal.
class MessageEnsemble {
 public:
  /// `states` is indexed a * nb + b; `p` is na x nb.
  MessageEnsemble(Eigen::MatrixXd p, std::vector<DensityOperator> states);

  int na() const noexcept { return static_cast<int>(p_.rows()); }
  int nb() const noexcept { return static_cast<int>(p_.cols()); }
  const Eigen::MatrixXd& p() const noexcept { return p_; }
  const DensityOperator& state(int a, int b) const {
    return states_[static_cast<std::size_t>(a * nb() + b)];
  }
  const SubsystemLayout& layout() const { return states_.front().layout(); }

  /// Members p_ab, |a><a|_Am (x) rho_ab (x) |b><b|_Bm.
  Ensemble flatten() const;
  /// E_b = {p_a|b, tr_Alice rho_ab} for p_b > 0.
  Ensemble conditional_forward(int b) const;
  /// E_a = {p_b|a, tr_Bob rho_ab} for p_a > 0.
  Ensemble conditional_backward(int a) const;
  std::vector<double> marginal_a() const;
  std::vector<double> marginal_b() const;

  MessageEnsemble transformed(const TwoWayChannel& n, const std::string& label_a = "A",
                              const std::string& label_b = "B") const;
  MessageEnsemble with_local_unitary(const Matrix& u, const std::string& label) const;

 private:
  Eigen::MatrixXd p_;
  std::vector<DensityOperator> states_;
};

double chi_bar_forward(const MessageEnsemble& e);
double chi_bar_backward(const MessageEnsemble& e);

json ensemble_to_json(const Ensemble& e);
/// Accepts "state" as a matrix or {"pure": vector}.
Ensemble ensemble_from_json(const json& j);

}  // namespace biduct
