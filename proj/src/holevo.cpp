#include "biduct/holevo.hpp"

#include <cmath>

#include "biduct/errors.hpp"

namespace biduct {

Ensemble::Ensemble(std::vector<EnsembleMember> members) : members_(std::move(members)) {
  if (members_.empty()) throw InputError("ensemble has no members");
  std::vector<double> p;
  for (const auto& m : members_) {
    if (!(m.state.layout() == members_.front().state.layout()))
      throw InputError("ensemble members have different layouts");
    p.push_back(m.p);
  }
  validate_probabilities(p);
}

Ensemble Ensemble::from_pure(std::span<const double> p, std::span<const Vector> states,
                             const SubsystemLayout& layout) {
  if (p.size() != states.size()) throw InputError("probability and state counts differ");
  std::vector<EnsembleMember> members;
  for (std::size_t i = 0; i < p.size(); ++i)
    members.push_back({p[i], PureState::normalized(states[i], layout).density()});
  return Ensemble(std::move(members));
}

std::vector<double> Ensemble::probabilities() const {
  std::vector<double> p;
  for (const auto& m : members_) p.push_back(m.p);
  return p;
}

DensityOperator Ensemble::average() const {
  Matrix avg = Matrix::Zero(members_.front().state.dim(), members_.front().state.dim());
  for (const auto& m : members_) avg += m.p * m.state.matrix();
  return DensityOperator(0.5 * (avg + avg.adjoint()), layout());
}

double holevo_chi(const Ensemble& e) {
  double s = von_neumann_entropy(e.average());
  for (const auto& m : e.members())
    if (m.p > 0.0) s -= m.p * von_neumann_entropy(m.state);
  return s;
}

Ensemble reduce(const Ensemble& e, std::span<const std::string> keep) {
  std::vector<EnsembleMember> out;
  for (const auto& m : e.members()) out.push_back({m.p, partial_trace(m.state, keep)});
  return Ensemble(std::move(out));
}

namespace {

double chi_of_party(const Ensemble& e, Party p) {
  const auto labels = e.layout().labels_of(p);
  if (labels.empty())
    throw InputError(std::string("layout has no subsystem owned by ") + to_string(p));
  return holevo_chi(reduce(e, labels));
}

}  // namespace

double chi_forward(const Ensemble& e) { return chi_of_party(e, Party::Bob); }
double chi_backward(const Ensemble& e) { return chi_of_party(e, Party::Alice); }

Ensemble apply_to_ensemble(const TwoWayChannel& n, const Ensemble& e, const std::string& label_a,
                           const std::string& label_b) {
  std::vector<EnsembleMember> out;
  for (const auto& m : e.members()) out.push_back({m.p, apply(n, m.state, label_a, label_b)});
  return Ensemble(std::move(out));
}

double delta_chi_forward(const TwoWayChannel& n, const Ensemble& e, const std::string& label_a,
                         const std::string& label_b) {
  return chi_forward(apply_to_ensemble(n, e, label_a, label_b)) - chi_forward(e);
}

double delta_chi_backward(const TwoWayChannel& n, const Ensemble& e, const std::string& label_a,
                          const std::string& label_b) {
  return chi_backward(apply_to_ensemble(n, e, label_a, label_b)) - chi_backward(e);
}

MessageEnsemble::MessageEnsemble(Eigen::MatrixXd p, std::vector<DensityOperator> states)
    : p_(std::move(p)), states_(std::move(states)) {
  if (p_.size() == 0) throw InputError("message ensemble has no messages");
  if (states_.size() != static_cast<std::size_t>(p_.size()))
    throw InputError("message ensemble needs one state per message pair");
  for (const auto& s : states_)
    if (!(s.layout() == states_.front().layout()))
      throw InputError("message ensemble states have different layouts");
  if (states_.front().layout().contains("Am") || states_.front().layout().contains("Bm"))
    throw InputError("labels Am and Bm are reserved for the message registers");
  const std::vector<double> flat(p_.data(), p_.data() + p_.size());
  validate_probabilities(flat);
}

Ensemble MessageEnsemble::flatten() const {
  const SubsystemLayout am({{"Am", na(), Party::Alice}});
  const SubsystemLayout bm({{"Bm", nb(), Party::Bob}});
  std::vector<EnsembleMember> out;
  for (int a = 0; a < na(); ++a)
    for (int b = 0; b < nb(); ++b)
      out.push_back({p_(a, b), tensor(tensor(DensityOperator::basis(am, static_cast<std::size_t>(a)),
                                             state(a, b)),
                                      DensityOperator::basis(bm, static_cast<std::size_t>(b)))});
  return Ensemble(std::move(out));
}

std::vector<double> MessageEnsemble::marginal_a() const {
  std::vector<double> out;
  for (int a = 0; a < na(); ++a) out.push_back(p_.row(a).sum());
  return out;
}

std::vector<double> MessageEnsemble::marginal_b() const {
  std::vector<double> out;
  for (int b = 0; b < nb(); ++b) out.push_back(p_.col(b).sum());
  return out;
}

Ensemble MessageEnsemble::conditional_forward(int b) const {
  const double pb = p_.col(b).sum();
  if (!(pb > 0.0)) throw InputError("conditional ensemble of a message with zero probability");
  const auto bob = layout().labels_of(Party::Bob);
  std::vector<EnsembleMember> out;
  for (int a = 0; a < na(); ++a) out.push_back({p_(a, b) / pb, partial_trace(state(a, b), bob)});
  return Ensemble(std::move(out));
}

Ensemble MessageEnsemble::conditional_backward(int a) const {
  const double pa = p_.row(a).sum();
  if (!(pa > 0.0)) throw InputError("conditional ensemble of a message with zero probability");
  const auto alice = layout().labels_of(Party::Alice);
  std::vector<EnsembleMember> out;
  for (int b = 0; b < nb(); ++b) out.push_back({p_(a, b) / pa, partial_trace(state(a, b), alice)});
  return Ensemble(std::move(out));
}

MessageEnsemble MessageEnsemble::transformed(const TwoWayChannel& n, const std::string& label_a,
                                             const std::string& label_b) const {
  std::vector<DensityOperator> out;
  for (const auto& s : states_) out.push_back(apply(n, s, label_a, label_b));
  return MessageEnsemble(p_, std::move(out));
}

MessageEnsemble MessageEnsemble::with_local_unitary(const Matrix& u, const std::string& label) const {
  std::vector<DensityOperator> out;
  for (const auto& s : states_) out.push_back(apply_local_unitary(s, u, label));
  return MessageEnsemble(p_, std::move(out));
}

double chi_bar_forward(const MessageEnsemble& e) {
  const auto pb = e.marginal_b();
  double total = 0.0;
  for (int b = 0; b < e.nb(); ++b)
    if (pb[static_cast<std::size_t>(b)] > 0.0)
      total += pb[static_cast<std::size_t>(b)] * holevo_chi(e.conditional_forward(b));
  return total;
}

double chi_bar_backward(const MessageEnsemble& e) {
  const auto pa = e.marginal_a();
  double total = 0.0;
  for (int a = 0; a < e.na(); ++a)
    if (pa[static_cast<std::size_t>(a)] > 0.0)
      total += pa[static_cast<std::size_t>(a)] * holevo_chi(e.conditional_backward(a));
  return total;
}

json ensemble_to_json(const Ensemble& e) {
  json members = json::array();
  for (const auto& m : e.members())
    members.push_back({{"p", round12(m.p)}, {"state", matrix_to_json(m.state.matrix())}});
  return {{"layout", layout_to_json(e.layout())}, {"members", members}};
}

Ensemble ensemble_from_json(const json& j) {
  try {
    const auto layout = layout_from_json(j.at("layout"));
    std::vector<EnsembleMember> members;
    for (const auto& m : j.at("members")) {
      const double p = m.at("p").get<double>();
      const auto& s = m.at("state");
      if (s.is_object())
        members.push_back({p, PureState::normalized(vector_from_json(s.at("pure")), layout).density()});
      else
        members.push_back({p, DensityOperator(matrix_from_json(s), layout)});
    }
    return Ensemble(std::move(members));
  } catch (const json::exception& ex) {
    throw InputError(std::string("malformed ensemble JSON: ") + ex.what());
  }
}

}  // namespace biduct
