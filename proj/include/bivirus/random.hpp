#pragma once

#include <cstddef>
#include <random>

#include "bivirus/model.hpp"

namespace bivirus {

using Rng = std::mt19937_64;

/// Irreducible nonnegative matrix: a random Hamiltonian cycle plus extra arcs
/// with probability `density`, weights uniform in [0.1, 1].
Matrix random_irreducible_nonnegative(std::size_t n, Rng& rng, double density = 0.3);

/// Irreducible Metzler matrix with diagonal uniform in [lo, hi].
Matrix random_irreducible_metzler(std::size_t n, Rng& rng, double lo = -3.0, double hi = 1.0);

enum class Criticality { Subcritical, Supercritical };

/// Virus whose healing rates are the row sums of B scaled into a range that
/// places rho(D^{-1} B) strictly below 1 (sub) or strictly above 1 (super).
VirusParams random_virus(std::size_t n, Rng& rng, Criticality c);

/// Uniformly random state in the interior of the invariant set.
SystemState random_interior_state(std::size_t n, Rng& rng);

}  // namespace bivirus
