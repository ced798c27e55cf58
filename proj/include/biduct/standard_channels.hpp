#pragma once

// Commonly used channels and random channel generators.

#include "biduct/channels.hpp"
#include "biduct/random.hpp"

namespace biduct::standard {

OneWayChannel identity(int d = 2);
/// Replaces every input with I/d_out.
OneWayChannel completely_depolarizing(int d_in = 2, int d_out = 2);
/// Kraus sqrt(1 - p) I, sqrt(p) Z on a qubit.
OneWayChannel dephasing(double p);
OneWayChannel amplitude_damping(double gamma);
/// Measure in the computational basis and re-prepare the outcome.
OneWayChannel measure_reprepare(int d = 2);

TwoWayChannel identity_two_way(int d_a = 2, int d_b = 2);
/// Exchanges Alice's and Bob's inputs.
TwoWayChannel swap(int d = 2);
TwoWayChannel completely_depolarizing_two_way(ChannelDims dims);

/// Channel with a Haar-random Stinespring isometry of the given Kraus rank.
OneWayChannel random_channel(int d_in, int d_out, int kraus_rank, Rng& rng);
TwoWayChannel random_two_way_channel(ChannelDims dims, int kraus_rank, Rng& rng);
/// Measure-and-prepare channel: rank-one POVM built from `outcomes` Haar
/// random vectors, each outcome re-preparing a random state. Entanglement
/// breaking by construction.
OneWayChannel random_entanglement_breaking(int d_in, int d_out, int outcomes, Rng& rng);

/// Pauli matrices I, X, Y, Z.
Matrix pauli(int index);
/// Generalised Pauli X^j Z^k on dimension d.
Matrix weyl(int d, int j, int k);

}  // namespace biduct::standard
