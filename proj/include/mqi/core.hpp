#pragma once

// Shared domain types and conventions for the chiral-waveguide emitter
// library. Units: gamma = 1 (nondirectional emission rate), c = hbar = 1.
// All rates and frequencies are expressed in units of gamma unless a
// SystemParams carries an explicit gamma.

#include <complex>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace mqi {

using Cx = std::complex<double>;

inline constexpr std::string_view version = "0.1.0";

// Failure of a numerical protocol (incomplete scattering, degenerate
// conditioning, missing bisection bracket). Distinct from invalid_argument
// so the CLI can map it to its own exit code.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Emitter/waveguide rates. gamma_f and gamma_b are the directional coupling
// rates into the forward and backward branch; gamma is the nondirectional
// spontaneous-emission rate that shows up as the imaginary part of the
// effective detuning. gamma = 0 is allowed (lossless idealization).
struct SystemParams {
    double gamma = 1.0;
    double gamma_f = 0.0;
    double gamma_b = 0.0;

    SystemParams(double gamma_, double gamma_f_, double gamma_b_);

    // Symmetric coupling, Gamma_f = Gamma_b = beta * gamma.
    static SystemParams symmetric(double beta, double gamma = 1.0);

    bool is_symmetric() const { return gamma_f == gamma_b; }

    // Gamma / gamma for the symmetric case; error otherwise (the ratio is
    // ambiguous when the two branch rates differ).
    double beta() const;
};

// Real detuning Delta = omega_A - Omega_E of a photon from the atomic
// transition. The complex extension Delta + i*gamma/2 is derived where
// needed, never stored.
struct Detuning {
    double value = 0.0;

    Detuning(double v = 0.0);
};

// Single-photon polarization qubit, alpha_H |H> + alpha_V |V>.
struct PolarizationState {
    Cx a_h;
    Cx a_v;

    PolarizationState(Cx h, Cx v);
};

// Atomic ground-state qubit, beta_+ |+> + beta_- |->.
struct AtomState {
    Cx b_plus;
    Cx b_minus;

    AtomState(Cx plus, Cx minus);
};

// Fixed ordering of the atom (x) photon product basis. Every 4-vector and
// 4x4 matrix in the library uses this order.
enum BasisIndex : int {
    idx_plus_h = 0,
    idx_plus_v = 1,
    idx_minus_h = 2,
    idx_minus_v = 3,
};

inline constexpr const char* basis_labels[4] = {"+H", "+V", "-H", "-V"};

// Atom (x) photon state in basis order (+H, +V, -H, -V). May be
// sub-normalized (conditional outcome after loss), never super-normalized.
struct JointState {
    Eigen::Vector4cd amps;

    explicit JointState(const Eigen::Vector4cd& a);

    double norm2() const { return amps.squaredNorm(); }
};

// 4x4 operator in the same basis. No intrinsic invariant; unitarity is the
// business of whoever builds it.
struct JointOperator {
    Eigen::Matrix4cd m;
};

JointState joint_from_parts(const AtomState& atom, const PolarizationState& photon);

// Inverse of joint_from_parts for product states: recovers the two factors
// (each up to a phase, with the relative phase pushed into the photon).
// Throws if the state is entangled beyond tolerance.
AtomState extract_atom(const JointState& js);
PolarizationState extract_photon(const JointState& js);

// Gaussian pulse spectrum f(omega) ~ exp(-((omega - center)/sigma)^2),
// discretized for quadrature. n_points must be odd so the center detuning
// itself is a grid point.
struct GaussianSpectrum {
    double center = 0.0;   // center detuning Delta_c, units of gamma
    double sigma = 1.0;    // bandwidth sigma_omega, units of gamma
    int n_points = 401;
    double span = 5.0;     // half-width of the grid in units of sigma

    GaussianSpectrum(double center_, double sigma_, int n_points_ = 401,
                     double span_ = 5.0);
};

struct SpectralPoint {
    double detuning;
    double weight;
};

// Uniform grid on [center - span*sigma, center + span*sigma] with weights
// proportional to |f|^2, renormalized so they sum to exactly 1.
std::vector<SpectralPoint> spectrum_grid(const GaussianSpectrum& s);

}  // namespace mqi
