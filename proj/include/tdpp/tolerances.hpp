#pragma once

namespace tdpp {

// Single source of truth for numerical tolerances.
// kInvariantTol guards structural invariants (hermiticity, trace, norms);
// kDerivedTol guards quantities computed through eigendecompositions.
inline constexpr double kInvariantTol = 1e-10;
inline constexpr double kDerivedTol = 1e-9;

// Eigenvalues of unit-trace matrices below this magnitude are rounding
// residue of exact zeros. Taking sqrt(1e-17) would inject ~3e-9 into an
// otherwise exact fidelity, so square-root paths snap them to zero first.
inline constexpr double kSpectralNoiseFloor = 1e-14;

} // namespace tdpp
