// Command-line reproduction harness: parameter sweeps and protocol runs
// emitted as CSV with a `#` metadata header. Exit codes: 0 success,
// 2 invalid arguments, 3 numeric failure, 4 I/O failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mqi/core.hpp"
#include "mqi/dynamics.hpp"
#include "mqi/gates.hpp"
#include "mqi/metrics.hpp"
#include "mqi/scattering.hpp"

namespace {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// "a,b:step" (inclusive range) or a plain comma-separated list
std::vector<double> parse_sweep(const std::string& text, const char* what) {
    const auto bad = [&](const std::string& why) {
        throw std::invalid_argument(std::string(what) + ": " + why);
    };
    auto to_double = [&](const std::string& s) {
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos != s.size() || !std::isfinite(v)) bad("malformed number '" + s + "'");
            return v;
        } catch (const std::logic_error&) {
            bad("malformed number '" + s + "'");
            return 0.0;  // unreachable
        }
    };
    std::vector<double> out;
    const auto colon = text.rfind(':');
    if (colon != std::string::npos) {
        const auto comma = text.find(',');
        if (comma == std::string::npos || comma > colon) bad("expected a,b:step");
        const double lo = to_double(text.substr(0, comma));
        const double hi = to_double(text.substr(comma + 1, colon - comma - 1));
        const double step = to_double(text.substr(colon + 1));
        if (step <= 0.0) bad("step must be > 0");
        if (hi < lo) bad("range end below start");
        const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
        for (long i = 0; i < n; ++i) out.push_back(lo + step * static_cast<double>(i));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(item));
    if (out.empty()) bad("empty list");
    return out;
}

std::vector<double> parse_range3(const std::string& text, const char* what) {
    std::vector<double> f;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(std::stod(item));
    if (f.size() != 3 || f[2] <= 0.0 || f[1] < f[0]) {
        throw std::invalid_argument(std::string(what) + ": expected min,max,step");
    }
    std::vector<double> out;
    const long n = static_cast<long>(std::floor((f[1] - f[0]) / f[2] + 1e-9)) + 1;
    for (long i = 0; i < n; ++i) out.push_back(f[0] + f[2] * static_cast<double>(i));
    return out;
}

void write_header(std::ostream& os, const std::string& command,
                  const std::string& params) {
    os << "# command: " << command << "\n";
    os << "# parameters: " << params << "\n";
    os << "# version: " << mqi::version << "\n";
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream f(path);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    fn(f);
    f.flush();
    if (!f.good()) throw IoError("write to '" + path + "' failed");
}

std::string replace_extension(const std::string& path, const std::string& ext) {
    const auto slash = path.find_last_of('/');
    const auto dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + ext;
    }
    return path.substr(0, dot) + ext;
}

mqi::SystemParams effective_params(double beta, double gamma, bool gamma_zero) {
    // with gamma frozen at zero the coupling keeps its numeric value as an
    // absolute rate instead of a multiple of gamma
    if (gamma_zero) return mqi::SystemParams(0.0, beta, beta);
    return mqi::SystemParams::symmetric(beta, gamma);
}

struct Options {
    std::string command;
    std::string out_path;
    bool emit_plot = false;

    double beta = 0.0;
    double gamma = 1.0;
    bool gamma_zero = false;
    double sigma = 5.0;
    double delta = 0.0;
    std::string betas;
    std::string sigmas;
    std::string delta_range;
    int n_points = 401;
    double span = 5.0;

    double sigma_k = 0.0;
    int n_modes = 0;
    double k_half_width = 0.0;
    double dt = 0.0;
    double t_end = 0.0;
    bool serial = false;

    std::string delta_kind = "0";
    double beta_a = 50.0;
    double beta_b = 50.0;

    // which flags the user actually set
    bool has_beta = false, has_delta = false, has_delta_range = false;
    bool has_sigma_k = false, has_n_modes = false, has_k_half_width = false;
    bool has_dt = false, has_t_end = false;
};

void emit_plot_script(const Options& opt, const std::string& csv_path) {
    std::string script;
    if (opt.command == "amplitudes") {
        script = "set xlabel 'delta / gamma'\nset ylabel 'amplitude'\n"
                 "plot csv using 1:2 with lines title '|T|', \\\n"
                 "     csv using 1:3 with lines title '|R|'\n";
    } else if (opt.command == "gates" || opt.command == "bandwidth") {
        script = std::string("set xlabel '") +
                 (opt.command == "gates" ? "beta" : "sigma / gamma") + "'\n" +
                 "set ylabel 'average metric'\n"
                 "plot csv using 1:2 with lines title 'F swap', \\\n"
                 "     csv using 1:3 with lines title 'eta swap', \\\n"
                 "     csv using 1:4 with lines title 'F ent', \\\n"
                 "     csv using 1:5 with lines title 'eta ent', \\\n"
                 "     csv using 1:6 with lines title 'F mem', \\\n"
                 "     csv using 1:7 with lines title 'eta mem'\n";
    } else if (opt.command == "dynamics") {
        script = "set xlabel 't * gamma'\nset ylabel 'probability'\n"
                 "plot csv using 1:2 with lines title 'forward', \\\n"
                 "     csv using 1:3 with lines title 'backward', \\\n"
                 "     csv using 1:4 with lines title 'excited', \\\n"
                 "     csv using 1:5 with lines title 'loss'\n";
    } else {
        throw std::invalid_argument("--emit-plot is not supported for command '" +
                                    opt.command + "'");
    }
    const std::string gp_path = replace_extension(csv_path, ".gp");
    with_output(gp_path, [&](std::ostream& os) {
        os << "# gnuplot script generated alongside " << csv_path << "\n";
        os << "set datafile separator ','\n";
        os << "csv = '" << csv_path << "'\n";
        os << script;
        os << "pause -1\n";
    });
}

int cmd_amplitudes(const Options& opt) {
    const double beta = opt.has_beta ? opt.beta : 10.0;
    const auto p = effective_params(beta, opt.gamma, opt.gamma_zero);
    std::vector<double> deltas;
    if (opt.has_delta && !opt.has_delta_range) {
        deltas.push_back(opt.delta);
    } else {
        deltas = parse_range3(opt.has_delta_range ? opt.delta_range : "-40,40,0.1",
                              "--delta-range");
    }
    std::vector<mqi::Detuning> dd;
    dd.reserve(deltas.size());
    for (double d : deltas) dd.emplace_back(d);
    const auto amps = amplitude_sweep(p, dd);

    with_output(opt.out_path, [&](std::ostream& os) {
        write_header(os, "amplitudes",
                     "beta=" + fmt9(beta) + " gamma=" + fmt9(p.gamma) +
                         " n_rows=" + std::to_string(deltas.size()));
        os << "delta_over_gamma,abs_T,abs_R,re_T,im_T,re_R,im_R,loss\n";
        for (size_t i = 0; i < amps.size(); ++i) {
            const auto& a = amps[i];
            os << fmt9(deltas[i]) << ',' << fmt9(std::abs(a.t)) << ','
               << fmt9(std::abs(a.r)) << ',' << fmt9(a.t.real()) << ','
               << fmt9(a.t.imag()) << ',' << fmt9(a.r.real()) << ','
               << fmt9(a.r.imag()) << ',' << fmt9(loss(a)) << '\n';
        }
    });
    if (opt.emit_plot) emit_plot_script(opt, opt.out_path);
    return 0;
}

void write_metric_rows(std::ostream& os, const std::vector<mqi::SweepRow>& rows) {
    for (const auto& r : rows) {
        os << fmt9(r.key) << ',' << fmt9(r.f_swap) << ',' << fmt9(r.eta_swap) << ','
           << fmt9(r.f_ent) << ',' << fmt9(r.eta_ent) << ',' << fmt9(r.f_mem) << ','
           << fmt9(r.eta_mem) << '\n';
    }
}

int cmd_gates(const Options& opt) {
    const auto betas =
        parse_sweep(opt.betas.empty() ? "10,50:2" : opt.betas, "--betas");
    const auto rows = mqi::sweep_beta(betas, opt.sigma, opt.n_points, opt.span);
    with_output(opt.out_path, [&](std::ostream& os) {
        write_header(os, "gates",
                     "sigma=" + fmt9(opt.sigma) + " n_points=" +
                         std::to_string(opt.n_points) + " span=" + fmt9(opt.span));
        os << "beta,f_swap,eta_swap,f_ent,eta_ent,f_mem,eta_mem\n";
        write_metric_rows(os, rows);
    });
    if (opt.emit_plot) emit_plot_script(opt, opt.out_path);
    return 0;
}

int cmd_bandwidth(const Options& opt) {
    const double beta = opt.has_beta ? opt.beta : 50.0;
    const auto sigmas =
        parse_sweep(opt.sigmas.empty() ? "1,30:1" : opt.sigmas, "--sigmas");
    const auto rows = mqi::sweep_bandwidth(sigmas, beta, opt.n_points, opt.span);
    with_output(opt.out_path, [&](std::ostream& os) {
        write_header(os, "bandwidth",
                     "beta=" + fmt9(beta) + " n_points=" +
                         std::to_string(opt.n_points) + " span=" + fmt9(opt.span));
        os << "sigma_over_gamma,f_swap,eta_swap,f_ent,eta_ent,f_mem,eta_mem\n";
        write_metric_rows(os, rows);
    });
    if (opt.emit_plot) emit_plot_script(opt, opt.out_path);
    return 0;
}

int cmd_dynamics(const Options& opt) {
    const double beta = opt.has_beta ? opt.beta : 50.0;
    const auto p = effective_params(beta, opt.gamma, opt.gamma_zero);
    const double cap = std::max(p.gamma_f, p.gamma_b);
    const double sigma_k = opt.has_sigma_k ? opt.sigma_k : (cap > 0.0 ? 0.1 * cap : 1.0);
    const auto wp = mqi::WavePacket::standard(opt.delta, sigma_k);

    mqi::KGrid grid = mqi::default_grid(p, wp);
    if (opt.has_n_modes || opt.has_k_half_width) {
        grid = mqi::KGrid(opt.has_n_modes ? opt.n_modes : grid.n_modes,
                          opt.has_k_half_width ? opt.k_half_width : grid.k_half_width);
    }
    const double dt = opt.has_dt ? opt.dt : mqi::default_dt(grid);
    const double t_end = opt.has_t_end ? opt.t_end : mqi::default_t_end(p, wp);

    const auto res = mqi::simulate(p, wp, grid, dt, t_end,
                                   opt.serial ? mqi::Exec::reference
                                              : mqi::Exec::parallel);
    const auto na = mqi::numeric_amplitudes(res, p, wp);
    const auto an = mqi::amplitudes(p, mqi::Detuning(opt.delta));
    const double err = std::max(std::abs(na.abs_t - std::abs(an.t)),
                                std::abs(na.abs_r - std::abs(an.r)));

    const std::string run_params =
        "beta=" + fmt9(beta) + " gamma=" + fmt9(p.gamma) + " delta=" +
        fmt9(opt.delta) + " sigma_k=" + fmt9(sigma_k) + " n_modes=" +
        std::to_string(grid.n_modes) + " k_half_width=" + fmt9(grid.k_half_width) +
        " dt=" + fmt9(dt) + " t_end=" + fmt9(t_end) +
        (opt.serial ? " exec=reference" : " exec=parallel");

    const auto write_series = [&](std::ostream& os) {
        write_header(os, "dynamics", run_params);
        os << "t,p_forward,p_backward,p_excited,p_loss\n";
        for (size_t i = 0; i < res.sample_times.size(); ++i) {
            os << fmt9(res.sample_times[i]) << ',' << fmt9(res.forward_history[i])
               << ',' << fmt9(res.backward_history[i]) << ','
               << fmt9(res.excited_history[i]) << ',' << fmt9(res.loss_history[i])
               << '\n';
        }
    };
    const auto write_summary = [&](std::ostream& os) {
        write_header(os, "dynamics-summary",
                     run_params + (na.narrowband ? " narrowband=1" : " narrowband=0"));
        os << "abs_T_numeric,abs_R_numeric,abs_T_analytic,abs_R_analytic,max_abs_error\n";
        os << fmt9(na.abs_t) << ',' << fmt9(na.abs_r) << ',' << fmt9(std::abs(an.t))
           << ',' << fmt9(std::abs(an.r)) << ',' << fmt9(err) << '\n';
    };

    if (opt.out_path.empty()) {
        write_series(std::cout);
        write_summary(std::cout);
    } else {
        with_output(opt.out_path, write_series);
        with_output(replace_extension(opt.out_path, ".summary.csv"), write_summary);
    }
    if (opt.emit_plot) emit_plot_script(opt, opt.out_path);
    return 0;
}

int cmd_matrix(const Options& opt) {
    const double beta = opt.has_beta ? opt.beta : 50.0;
    const auto p = effective_params(beta, opt.gamma, opt.gamma_zero);
    const double cap = p.gamma_f;

    double delta = 0.0;
    bool at_operating_point = false;
    if (opt.delta_kind == "0") {
        delta = 0.0;
    } else if (opt.delta_kind == "+" || opt.delta_kind == "+gamma_cap") {
        delta = cap;
        at_operating_point = true;
    } else if (opt.delta_kind == "-" || opt.delta_kind == "-gamma_cap") {
        delta = -cap;
        at_operating_point = true;
    } else {
        throw std::invalid_argument("--delta-kind must be one of 0, +gamma_cap, -gamma_cap");
    }

    const auto a = mqi::amplitudes(p, mqi::Detuning(delta));
    const auto s = mqi::scattering_operator(a);
    // the square of the operator at +/-Gamma should land on the resonant
    // operator; the resonant operator squared should land on the identity
    const auto square_target = at_operating_point
                                   ? mqi::scattering_operator(mqi::amplitudes(p, mqi::Detuning(0.0)))
                                   : mqi::JointOperator{Eigen::Matrix4cd::Identity()};
    const double square_defect = mqi::verify_sqrt_swap(s, square_target);
    const double unitarity_defect =
        (s.m.adjoint() * s.m - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff();
    const auto equiv = mqi::local_swap_equivalence(s);

    with_output(opt.out_path, [&](std::ostream& os) {
        write_header(os, "matrix",
                     "beta=" + fmt9(beta) + " gamma=" + fmt9(p.gamma) +
                         " delta_kind=" + opt.delta_kind + " delta=" + fmt9(delta));
        os << "record,i,j,re,im\n";
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                os << "scattering," << i << ',' << j << ',' << fmt9(s.m(i, j).real())
                   << ',' << fmt9(s.m(i, j).imag()) << '\n';
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                os << "local_swap_equivalence," << i << ',' << j << ','
                   << fmt9(equiv.m(i, j).real()) << ',' << fmt9(equiv.m(i, j).imag())
                   << '\n';
        os << "unitarity_defect,-1,-1," << fmt9(unitarity_defect) << ",0\n";
        os << "sqrt_swap_square_defect,-1,-1," << fmt9(square_defect) << ",0\n";
    });
    return 0;
}

int cmd_memory(const Options& opt) {
    const double beta = opt.has_beta ? opt.beta : 50.0;
    const auto p = effective_params(beta, opt.gamma, opt.gamma_zero);
    const mqi::GaussianSpectrum spec(0.0, opt.sigma, opt.n_points, opt.span);
    const auto rep = mqi::memory_metrics(p, spec);

    static const char* labels[6] = {"h", "v", "diag_plus", "diag_minus",
                                    "circ_plus", "circ_minus"};
    with_output(opt.out_path, [&](std::ostream& os) {
        write_header(os, "memory",
                     "beta=" + fmt9(beta) + " gamma=" + fmt9(p.gamma) + " sigma=" +
                         fmt9(opt.sigma) + " n_points=" + std::to_string(opt.n_points) +
                         " span=" + fmt9(opt.span));
        os << "state,fidelity,efficiency\n";
        for (const auto& ps : rep.per_state) {
            os << labels[ps.index] << ',' << fmt9(ps.fidelity) << ','
               << fmt9(ps.efficiency) << '\n';
        }
        os << "average," << fmt9(rep.f_bar) << ',' << fmt9(rep.eta_bar) << '\n';
    });
    return 0;
}

int cmd_network(const Options& opt) {
    const auto p_a = effective_params(opt.beta_a, opt.gamma, opt.gamma_zero);
    const auto p_b = effective_params(opt.beta_b, opt.gamma, opt.gamma_zero);
    const mqi::GaussianSpectrum spec(p_a.gamma_f, opt.sigma, opt.n_points, opt.span);
    const auto d = mqi::remote_entanglement(p_a, p_b, spec);
    const double conc = mqi::concurrence(d.rho);
    const double bf = mqi::bell_fidelity(d);

    with_output(opt.out_path, [&](std::ostream& os) {
        write_header(os, "network",
                     "beta_a=" + fmt9(opt.beta_a) + " beta_b=" + fmt9(opt.beta_b) +
                         " gamma=" + fmt9(p_a.gamma) + " sigma=" + fmt9(opt.sigma) +
                         " n_points=" + std::to_string(opt.n_points) +
                         " span=" + fmt9(opt.span));
        os << "beta_A,beta_B,sigma_over_gamma,concurrence,bell_fidelity,success_prob\n";
        os << fmt9(opt.beta_a) << ',' << fmt9(opt.beta_b) << ',' << fmt9(opt.sigma)
           << ',' << fmt9(conc) << ',' << fmt9(bf) << ',' << fmt9(d.success_prob)
           << '\n';
    });
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"chiral-waveguide quantum interface: sweeps and protocol runs"};
    app.set_config("--config", "", "plain `key = value` file; flags take precedence");
    app.set_version_flag("--version", std::string(mqi::version));

    app.add_option("command", opt.command, "one of: amplitudes, dynamics, gates, bandwidth, matrix, memory, network")
        ->required()
        ->check(CLI::IsMember({"amplitudes", "dynamics", "gates", "bandwidth", "matrix",
                               "memory", "network"}));

    auto* o_beta = app.add_option("--beta", opt.beta, "coupling ratio Gamma/gamma");
    app.add_option("--gamma", opt.gamma, "nondirectional emission rate (default 1)");
    app.add_flag("--gamma-zero", opt.gamma_zero,
                 "lossless limit: gamma = 0, --beta read as an absolute rate");
    app.add_option("--betas", opt.betas, "sweep list, `a,b:step` or comma-separated");
    app.add_option("--sigma", opt.sigma, "pulse bandwidth sigma_omega in gamma units");
    app.add_option("--sigmas", opt.sigmas, "bandwidth sweep list, `a,b:step` or comma-separated");
    auto* o_delta = app.add_option("--delta", opt.delta, "photon detuning in gamma units");
    auto* o_drange = app.add_option("--delta-range", opt.delta_range, "detuning sweep `min,max,step`");
    app.add_option("--n-points", opt.n_points, "spectral quadrature points (odd)");
    app.add_option("--span", opt.span, "quadrature half-width in units of sigma");
    auto* o_sigk = app.add_option("--sigma-k", opt.sigma_k, "packet spectral width (default 0.1*Gamma)");
    auto* o_nm = app.add_option("--n-modes", opt.n_modes, "k-grid modes per direction");
    auto* o_khw = app.add_option("--k-half-width", opt.k_half_width, "k-grid half-width");
    auto* o_dt = app.add_option("--dt", opt.dt, "integrator time step");
    auto* o_te = app.add_option("--t-end", opt.t_end, "integration end time");
    app.add_flag("--serial", opt.serial, "use the reference integrator");
    app.add_option("--delta-kind", opt.delta_kind, "matrix operating point: 0, +gamma_cap, -gamma_cap");
    app.add_option("--beta-a", opt.beta_a, "node A coupling ratio");
    app.add_option("--beta-b", opt.beta_b, "node B coupling ratio");
    app.add_option("--out", opt.out_path, "output CSV path (stdout when omitted)");
    app.add_flag("--emit-plot", opt.emit_plot, "write a gnuplot script next to the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: invalid-argument: " << e.what() << "\n";
        return 2;
    }

    opt.has_beta = o_beta->count() > 0;
    opt.has_delta = o_delta->count() > 0;
    opt.has_delta_range = o_drange->count() > 0;
    opt.has_sigma_k = o_sigk->count() > 0;
    opt.has_n_modes = o_nm->count() > 0;
    opt.has_k_half_width = o_khw->count() > 0;
    opt.has_dt = o_dt->count() > 0;
    opt.has_t_end = o_te->count() > 0;

    try {
        if (opt.emit_plot && opt.out_path.empty()) {
            throw std::invalid_argument("--emit-plot requires --out");
        }
        if (opt.command == "amplitudes") return cmd_amplitudes(opt);
        if (opt.command == "dynamics") return cmd_dynamics(opt);
        if (opt.command == "gates") return cmd_gates(opt);
        if (opt.command == "bandwidth") return cmd_bandwidth(opt);
        if (opt.command == "matrix") return cmd_matrix(opt);
        if (opt.command == "memory") return cmd_memory(opt);
        return cmd_network(opt);
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 4;
    } catch (const mqi::NumericError& e) {
        std::cerr << "error: numeric: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid-argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
