#include "mqi/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace mqi {

ScatteringAmplitudes amplitudes(const SystemParams& p, Detuning d) {
    // Decoupled forward branch: the photon never meets the emitter. This
    // also sidesteps the 0/0 in the general transmission expression.
    if (p.gamma_f == 0.0) {
        return {Cx(0.0, 0.0), Cx(0.0, 0.0), Cx(1.0, 0.0)};
    }

    const double sf = std::sqrt(p.gamma_f);
    const double sb = std::sqrt(p.gamma_b);
    const Cx i(0.0, 1.0);

    // Stationary solution of the driven emitter. With the effective
    // detuning dt = Delta + i*gamma/2,
    //   phi_e = 2*sqrt(Gf) / (2*dt + i*(Gf + Gb))
    //   r = -i*sqrt(Gb)*phi_e,  t = 1 - i*sqrt(Gf)*phi_e
    // which gives 1 - |r|^2 - |t|^2 = 4*Gf*gamma / |2*dt + i*(Gf+Gb)|^2,
    // nonnegative for every parameter choice and zero exactly when
    // gamma = 0. For symmetric coupling this reduces to the familiar
    // t = 2*dt / (2*dt + 2i*Gamma), r = t - 1.
    const Cx dt(d.value, 0.5 * p.gamma);
    const Cx phi_e = 2.0 * sf / (2.0 * dt + i * (p.gamma_f + p.gamma_b));
    const Cx r = -i * sb * phi_e;
    const Cx t = 1.0 - i * sf * phi_e;
    return {phi_e, r, t};
}

std::vector<ScatteringAmplitudes> amplitude_sweep(const SystemParams& p,
                                                  const std::vector<Detuning>& deltas) {
    std::vector<ScatteringAmplitudes> out;
    out.reserve(deltas.size());
    for (const auto& d : deltas) out.push_back(amplitudes(p, d));
    return out;
}

double loss(const ScatteringAmplitudes& a) {
    return std::max(0.0, 1.0 - std::norm(a.r) - std::norm(a.t));
}

namespace {

double split_gap(const SystemParams& p, double delta) {
    auto a = amplitudes(p, Detuning(delta));
    return std::abs(a.r) - std::abs(a.t);
}

}  // namespace

std::pair<Detuning, Detuning> equal_split_detunings(const SystemParams& p) {
    if (!p.is_symmetric()) {
        throw std::invalid_argument("equal_split_detunings requires gamma_f == gamma_b");
    }
    const double cap = p.gamma_f;
    double lo = 0.0;
    double hi = 3.0 * cap;
    double glo = split_gap(p, lo);
    double ghi = split_gap(p, hi);
    if (!(glo > 0.0) || !(ghi < 0.0)) {
        throw NoCrossingError("|r| - |t| does not change sign on (0, 3*Gamma]");
    }
    const double tol = 1e-10 * (p.gamma > 0.0 ? p.gamma : cap);
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (split_gap(p, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double star = 0.5 * (lo + hi);
    return {Detuning(star), Detuning(-star)};
}

}  // namespace mqi
