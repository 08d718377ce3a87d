#pragma once

// Spectrally averaged fidelities and efficiencies of the three interface
// functions (SWAP, entangling gate, polarization memory), evaluated over
// the overcomplete probe-state sets.

#include <vector>

#include "mqi/core.hpp"

namespace mqi {

// The six eigenstates of the three Pauli axes, the single-qubit probe set.
std::vector<AtomState> atom_probe_states();
std::vector<PolarizationState> photon_probe_states();

// All 36 atom (x) photon products of the two sets above, in row-major
// (atom-major) order.
std::vector<JointState> joint_probe_states();

enum class GateKind { swap_gate, entangle_gate };

struct PerStateMetric {
    int index;
    double fidelity;
    double efficiency;
};

struct MetricsReport {
    double f_bar = 0.0;
    double eta_bar = 0.0;
    std::vector<PerStateMetric> per_state;
};

// A probe state scattered with vanishing weight everywhere; the
// conditional fidelity is undefined.
struct DegenerateScatteringError : NumericError {
    using NumericError::NumericError;
};

// Average over the 36 joint states of the overlap with the ideal gate
// output and of the conditional norm, each reduced to a single integral
// over the spectral weight (elastic scattering, no cross-frequency terms):
//   O_i = sum_j w_j <u_i| S_ideal^dag S(d_j) |u_i>
//   n_i = sum_j w_j <u_i| S(d_j)^dag S(d_j) |u_i>
//   fidelity_i = |O_i| / sqrt(n_i), efficiency_i = n_i.
// The spectrum must be centered on the gate's operating point: 0 for
// swap_gate, +/-Gamma for entangle_gate (the sign picks the ideal branch).
MetricsReport gate_metrics(GateKind kind, const SystemParams& p,
                           const GaussianSpectrum& spec);

// Same estimator over the 6 photon states with the store-then-retrieve
// filter m(d) = [[r^2, 0], [t, 1]] in place of the gate operator and the
// identity as the ideal. Center must be 0.
MetricsReport memory_metrics(const SystemParams& p, const GaussianSpectrum& spec);

// One row of the sweep tables. key is the swept quantity (beta or
// sigma_omega, in units of gamma).
struct SweepRow {
    double key;
    double f_swap, eta_swap;
    double f_ent, eta_ent;
    double f_mem, eta_mem;
};

// All six metrics per beta at fixed bandwidth (gamma = 1). Rows come back
// in input order regardless of how the points are scheduled.
std::vector<SweepRow> sweep_beta(const std::vector<double>& betas, double sigma,
                                 int n_points = 401, double span = 5.0);

// All six metrics per bandwidth at fixed beta (gamma = 1).
std::vector<SweepRow> sweep_bandwidth(const std::vector<double>& sigmas, double beta,
                                      int n_points = 401, double span = 5.0);

}  // namespace mqi
