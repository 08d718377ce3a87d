#pragma once

// Atom-photon gate layer: the 4x4 scattering operator built from (r, t),
// the SWAP / sqrt-SWAP identities, the polarization memory filter, and the
// two-node heralded-entanglement protocol.

#include <vector>

#include "mqi/core.hpp"
#include "mqi/scattering.hpp"

namespace mqi {

// [[1,0,0,0],[0,t,r,0],[0,r,t,0],[0,0,0,1]] in basis (+H, +V, -H, -V).
// |+,H> and |-,V> are always fixed points; the middle block mixes
// |+,V> <-> |-,H| through the emitter.
JointOperator scattering_operator(const ScatteringAmplitudes& a);

// Lossless closed forms at the three operating points. sign selects the
// detuning branch of the entangling operator (+1 for Delta = +Gamma).
JointOperator swap_point_operator();
JointOperator entangle_point_operator(int sign);

// Conjugation by the photon-side phase flip diag(1,-1) that turns the
// resonant operator into the literal SWAP permutation (and the entangling
// ones into the standard sqrt-SWAP matrices).
JointOperator local_swap_equivalence(const JointOperator& s);

// max_ij |(sg^2 - s0)_ij|, the defect of the square identity.
double verify_sqrt_swap(const JointOperator& sg, const JointOperator& s0);

// Conditional store-then-retrieve map on the photon polarization,
// out = m * in on basis (H, V): m = [[r^2, 0], [t, 1]].
struct MemoryFilter {
    Eigen::Matrix2cd m;
};

MemoryFilter memory_filter(const ScatteringAmplitudes& a);

// One surviving two-photon branch after the storage/readout sequence,
// conditioned on the atom ending in |->. pol indices: 0 = H, 1 = V.
struct MemoryBranch {
    int pol1;
    int pol2;
    Cx amp;
};

struct MemoryTrace {
    std::vector<MemoryBranch> branches;
    double success_prob;  // sum of branch probabilities

    // Sum branch amplitudes coherently onto the readout photon (photon 2),
    // discarding the photon-1 label. Equals memory_filter(a) * input when
    // storage and readout see the same amplitudes.
    Eigen::Vector2cd coherent_readout() const;
};

// Full two-step composition: scatter photon 1 (input state) off the atom
// prepared in |->, then photon 2 (initialized |V>) off the same atom,
// project the atom onto |->. Branches are kept distinguishable; see
// MemoryTrace::coherent_readout for the filter-matrix view.
MemoryTrace memory_trace(const PolarizationState& photon,
                         const ScatteringAmplitudes& a_store,
                         const ScatteringAmplitudes& a_read);

struct DegenerateProtocolError : NumericError {
    using NumericError::NumericError;
};

// Conditional two-atom state on basis (|++>, |+->, |-+>, |-->) with the
// herald probability of obtaining it.
struct TwoAtomDensity {
    Eigen::Matrix4cd rho;
    double success_prob;

    TwoAtomDensity(const Eigen::Matrix4cd& rho_, double success_prob_);
};

// Wootters concurrence of a two-qubit density matrix. Uses the Hermitian
// similarity form sqrt(rho) * (Y rho* Y) * sqrt(rho) so the eigenvalues
// come from a self-adjoint solve (stable near pure states).
double concurrence(const Eigen::Matrix4cd& rho);

// Heralded remote entanglement: a photon spectrally centered on node A's
// entangling point (Delta_c = Gamma_A) scatters first off atom A (prepared
// |+>), then off atom B (prepared |->, tuned so the center frequency hits
// its resonance). The photon polarization is traced out, weighted by the
// spectrum. Requires both nodes symmetric and spec.center == Gamma_A.
TwoAtomDensity remote_entanglement(const SystemParams& p_a, const SystemParams& p_b,
                                   const GaussianSpectrum& spec);

// The pure state the protocol produces in the lossless monochromatic
// limit, ((1-i)|+-> + (1+i)|-+>)/2.
Eigen::Vector4cd remote_bell_target();

// <target| rho |target> against the state above.
double bell_fidelity(const TwoAtomDensity& d);

}  // namespace mqi
