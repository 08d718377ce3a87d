#pragma once

// Closed-form stationary scattering of a monochromatic forward photon off
// the chirally coupled three-level emitter.

#include <utility>
#include <vector>

#include "mqi/core.hpp"

namespace mqi {

// Amplitudes at one detuning: excited-state amplitude phi_e, reflection r,
// transmission t. For gamma = 0 the flux |r|^2 + |t|^2 is exactly 1; for
// gamma > 0 the deficit is the nondirectional-emission probability.
struct ScatteringAmplitudes {
    Cx phi_e;
    Cx r;
    Cx t;
};

ScatteringAmplitudes amplitudes(const SystemParams& p, Detuning d);

std::vector<ScatteringAmplitudes> amplitude_sweep(const SystemParams& p,
                                                  const std::vector<Detuning>& deltas);

// Nondirectional loss probability 1 - |r|^2 - |t|^2 (clamped at 0 against
// rounding).
double loss(const ScatteringAmplitudes& a);

// Bisection on |r| - |t| found no bracket, e.g. for zero coupling.
struct NoCrossingError : NumericError {
    using NumericError::NumericError;
};

// The two real detunings (positive, negative) where |r| = |t|, located by
// bisection over (0, 3*Gamma] and mirrored. Requires symmetric coupling.
// For gamma -> 0 these converge to +/- Gamma.
std::pair<Detuning, Detuning> equal_split_detunings(const SystemParams& p);

}  // namespace mqi
