#include "elreg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace elreg {

namespace {

// L^dim sum over modes of w(k) |fhat|^2
double weighted_energy(const SpectralField& f, const std::function<double(double)>& weight) {
    const Grid& g = f.grid();
    double acc = 0.0;
    for (std::size_t m = 0; m < f.modes(); ++m) {
        double w = weight(g.k2(m));
        if (w == 0.0) continue;
        double a2 = 0.0;
        for (int c = 0; c < f.ncomp(); ++c) a2 += std::norm(f.at(c, m));
        acc += w * a2;
    }
    return g.volume() * acc;
}

SpectralField rho_field(const SpectralField& d) {
    SpectralField rho = apply_multiplier(d, SymbolSpec::a1_pow(1.0));
    rho += ginzburg_landau_force(d).force;  // force is dealiased
    return rho;
}

}  // namespace

EnergyRecord total_energy(const SimState& state, const ModelParams& params,
                          const LeslieCoefficients&) {
    EnergyRecord rec;
    rec.t = state.t;
    rec.kinetic = 0.5 * weighted_energy(state.u, [&](double k2) { return params.q_symbol(k2); });
    rec.elastic = 0.5 * weighted_energy(state.d, [](double k2) { return k2; });
    rec.potential = ginzburg_landau_force(state.d).potential_integral;
    rec.e_total = rec.kinetic + rec.elastic + rec.potential;
    return rec;
}

EnergyRecord dissipation_components(const SimState& state, const ModelParams& params,
                                    const LeslieCoefficients& leslie) {
    ForcingSpec none;
    StateEval ev = evaluate_rhs(state, params, leslie, none, state.t, true);
    EnergyRecord rec;
    rec.t = state.t;
    rec.diss_visc = weighted_energy(
        state.u, [&](double k2) { return params.a0_symbol(k2) * params.q_symbol(k2); });
    rec.diss_rho = -(1.0 / leslie.lambda1()) *
                   std::pow(sobolev_norm(ev.rho, 0.0, NormConvention::director), 2);
    rec.diss_mu1 = leslie.mu1 * ev.int_s2;
    rec.diss_aqd = ev.int_ad2;
    rec.diss_nq = ev.int_nq2;
    return rec;
}

EnergyRecord make_energy_record_from_eval(const SimState& state, const StateEval& eval,
                                          const ModelParams& params,
                                          const LeslieCoefficients& leslie,
                                          const ForcingSpec& forcing,
                                          const std::vector<ExtraNorm>& extras) {
    if (!eval.has_diagnostics)
        throw std::invalid_argument("make_energy_record_from_eval: diagnostics missing");
    EnergyRecord rec;
    rec.t = state.t;
    rec.kinetic = 0.5 * weighted_energy(state.u, [&](double k2) { return params.q_symbol(k2); });
    rec.elastic = 0.5 * weighted_energy(state.d, [](double k2) { return k2; });
    rec.potential = eval.potential;
    rec.e_total = rec.kinetic + rec.elastic + rec.potential;

    rec.diss_visc = weighted_energy(
        state.u, [&](double k2) { return params.a0_symbol(k2) * params.q_symbol(k2); });
    rec.diss_rho = -(1.0 / leslie.lambda1()) *
                   std::pow(sobolev_norm(eval.rho, 0.0, NormConvention::director), 2);
    rec.diss_mu1 = leslie.mu1 * eval.int_s2;
    rec.diss_aqd = eval.int_ad2;
    rec.diss_nq = eval.int_nq2;

    if (forcing.kind != ForcingKind::zero) {
        SpectralField g = forcing_eval(forcing, state.t, state.u.grid_ptr());
        SpectralField qu = apply_multiplier(state.u, params.q_spec());
        rec.forcing_power = inner_product(g, qu);
    }
    rec.norm_u_m_theta2 = sobolev_norm(state.u, -params.theta2, NormConvention::velocity);
    rec.norm_u_theta_m_theta2 =
        sobolev_norm(state.u, params.theta - params.theta2, NormConvention::velocity);
    rec.max_abs_d = fft::to_physical(state.d).max_pointwise_norm();
    for (const auto& ex : extras) {
        const SpectralField& f = ex.field == 'u' ? state.u : state.d;
        auto conv = ex.field == 'u' ? NormConvention::velocity : NormConvention::director;
        rec.extra_norms.push_back(sobolev_norm(f, ex.s, conv));
    }
    return rec;
}

EnergyRecord make_energy_record(const SimState& state, const ModelParams& params,
                                const LeslieCoefficients& leslie, const ForcingSpec& forcing,
                                const std::vector<ExtraNorm>& extras) {
    StateEval ev = evaluate_rhs(state, params, leslie, forcing, state.t, true);
    return make_energy_record_from_eval(state, ev, params, leslie, forcing, extras);
}

double energy_budget_residual(const EnergyRecord& prev, const EnergyRecord& next, double dt,
                              const LeslieCoefficients& leslie) {
    auto avg = [](double a, double b) { return 0.5 * (a + b); };
    const double l1 = leslie.lambda1();
    const double l2 = leslie.lambda2();
    const double dedt = (next.e_total - prev.e_total) / dt;

    if (leslie.case_selector == CaseSelector::case1) {
        double coef = leslie.mu5 + leslie.mu6 + l2 * l2 / l1;
        double r = dedt + avg(prev.diss_visc, next.diss_visc) + avg(prev.diss_rho, next.diss_rho) +
                   avg(prev.diss_mu1, next.diss_mu1) + coef * avg(prev.diss_aqd, next.diss_aqd) -
                   avg(prev.forcing_power, next.forcing_power);
        return std::abs(r);
    }
    double gap = l2 - leslie.mu2 - leslie.mu3;
    double coef = leslie.mu5 + leslie.mu6 + gap * gap / l1;
    double r = dedt + avg(prev.diss_visc, next.diss_visc) + avg(prev.diss_mu1, next.diss_mu1) -
               0.75 * l1 * avg(prev.diss_nq, next.diss_nq) +
               coef * avg(prev.diss_aqd, next.diss_aqd) -
               avg(prev.forcing_power, next.forcing_power);
    return std::max(0.0, r);
}

double equilibrium_residual(const SpectralField& d) {
    return sobolev_norm(rho_field(d), 0.0, NormConvention::director);
}

SteadyResult steady_state_solve(const SpectralField& d0, double tol, int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("steady_state_solve: tol must be > 0");
    const Grid& g = d0.grid();

    auto force = [](const SpectralField& d) {
        SpectralField f = rho_field(d);
        f *= -1.0;
        return dealias(f);
    };

    // explicit RK4; stability limit from the stiffest retained mode plus the
    // potential curvature
    double kmax2 = g.dim * std::pow(g.dealias_limit() * g.k_scale(), 2);
    double tau = 2.5 / (kmax2 + 8.0);

    SteadyResult out{dealias(d0), equilibrium_residual(d0), 0, false};
    if (out.residual <= tol) {
        out.converged = true;
        return out;
    }
    for (int it = 1; it <= max_iters; ++it) {
        SpectralField k1 = force(out.d_star);
        SpectralField y2 = out.d_star; y2.axpy(0.5 * tau, k1);
        SpectralField k2 = force(y2);
        SpectralField y3 = out.d_star; y3.axpy(0.5 * tau, k2);
        SpectralField k3 = force(y3);
        SpectralField y4 = out.d_star; y4.axpy(tau, k3);
        SpectralField k4 = force(y4);
        out.d_star.axpy(tau / 6.0, k1);
        out.d_star.axpy(tau / 3.0, k2);
        out.d_star.axpy(tau / 3.0, k3);
        out.d_star.axpy(tau / 6.0, k4);
        out.iterations = it;
        out.residual = equilibrium_residual(out.d_star);
        if (!std::isfinite(out.residual))
            throw BlowupError("steady_state_solve diverged");
        if (out.residual <= tol) {
            out.converged = true;
            break;
        }
    }
    return out;
}

std::tuple<double, double, double> fit_decay_exponent(const std::vector<double>& times,
                                                      const std::vector<double>& values,
                                                      double floor) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (values[i] > floor && std::isfinite(values[i])) {
            x.push_back(std::log1p(times[i]));
            y.push_back(std::log(values[i]));
        }
    }
    if (x.size() < 2) return {0.0, 0.0, 0.0};
    double n = static_cast<double>(x.size());
    double sx = std::accumulate(x.begin(), x.end(), 0.0);
    double sy = std::accumulate(y.begin(), y.end(), 0.0);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return {0.0, std::exp(sy / n), 0.0};
    double slope = (n * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (slope * x[i] + intercept);
        rss += e * e;
    }
    return {-slope, std::exp(intercept), std::sqrt(rss / n)};
}

double phi_functional(const EnergyRecord& rec, const ModelParams& params,
                      const ForcingSpec& forcing, double g0_norm2, double c_a0q) {
    double qn = q_operator_norm(params);
    double tail = forcing.tail_integral(rec.t, g0_norm2);
    return rec.e_total + 2.0 * qn * qn / c_a0q * tail;
}

ConvergenceReport convergence_monitor(const std::vector<EnergyRecord>& records,
                                      const std::vector<DirectorSample>& director_history,
                                      const SpectralField& d_star,
                                      const SpectralField& u_final,
                                      const ModelParams& params,
                                      const LeslieCoefficients& leslie,
                                      const ForcingSpec& forcing,
                                      const ConvergenceOptions& opts) {
    ConvergenceReport rep;
    if (records.size() < 20 || director_history.empty()) return rep;

    // transient: first time E_Q falls below transient_factor x its tail mean
    std::size_t tail_start = records.size() - std::max<std::size_t>(1, records.size() / 5);
    double tail_mean = 0.0;
    for (std::size_t i = tail_start; i < records.size(); ++i) tail_mean += records[i].e_total;
    tail_mean /= static_cast<double>(records.size() - tail_start);
    double transient_end = records.front().t;
    for (const auto& r : records) {
        if (r.e_total <= opts.transient_factor * tail_mean + 1e-300) {
            transient_end = r.t;
            break;
        }
    }
    double t_half =
        records[static_cast<std::size_t>((1.0 - opts.fit_fraction) * (records.size() - 1))].t;
    double fit_start = std::max(transient_end, t_half);

    std::vector<double> times, dists;
    for (const auto& s : director_history) {
        if (s.t < fit_start) continue;
        SpectralField diff = s.d - d_star;
        times.push_back(s.t);
        dists.push_back(sobolev_norm(diff, 0.0, NormConvention::director));
    }
    if (times.size() >= 3) {
        double peak = *std::max_element(dists.begin(), dists.end());
        auto [chi, pref, res] = fit_decay_exponent(times, dists, 1e-13 * std::max(1.0, peak));
        rep.chi_fit = chi;
        rep.prefactor = pref;
        rep.fit_residual = res;
        rep.fit_ok = true;
    }

    // Phi monotonicity along the whole record sequence
    double g0n2 = 0.0;
    if (forcing.kind != ForcingKind::zero)
        g0n2 = std::pow(sobolev_norm(forcing.profile, -params.theta - params.theta2,
                                     NormConvention::velocity),
                        2);
    GridPtr grid = d_star.grid_ptr();
    double c_a0q = coercivity_constants(params, *grid).c_a0q;
    rep.phi_nonincreasing = true;
    rep.max_phi_increase = 0.0;
    double prev_phi = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        double phi = phi_functional(records[i], params, forcing, g0n2, c_a0q);
        if (i > 0) {
            double jump = phi - prev_phi;
            rep.max_phi_increase = std::max(rep.max_phi_increase, jump);
            if (jump > opts.phi_tolerance) rep.phi_nonincreasing = false;
        }
        prev_phi = phi;
    }

    rep.terminal_u_norm = sobolev_norm(u_final, -params.theta2, NormConvention::velocity);
    const SpectralField& d_final = director_history.back().d;
    rep.terminal_equilibrium_residual = equilibrium_residual(d_final);

    bool d_bounded = true;
    for (const auto& r : records)
        if (!(r.max_abs_d < 1e3)) d_bounded = false;
    if (params.theta + params.theta2 >= 1.0 && d_bounded) {
        rep.strong_mode = true;
        SpectralField diff = d_final - d_star;
        rep.terminal_d_dist_h1 = sobolev_norm(diff, 1.0, NormConvention::director);
    }
    (void)leslie;
    return rep;
}

BoundednessReport dissipative_bound_check(const std::vector<double>& times,
                                          const std::vector<double>& values, int window) {
    BoundednessReport rep;
    const int n = static_cast<int>(values.size());
    if (n < 8) return rep;
    int w = window > 0 ? window : n / 4;
    w = std::min(w, n / 3);
    int calib_begin = std::max(0, n - 2 * w);
    int calib_end = n - w;  // trailing w samples verify containment
    double mx = 0.0;
    for (int i = calib_begin; i < calib_end; ++i) mx = std::max(mx, values[i]);
    rep.c_star = 1.5 * mx;
    rep.bounded = true;
    for (int i = calib_end; i < n; ++i)
        if (values[i] > rep.c_star) rep.bounded = false;
    if (rep.bounded) {
        int entrance = calib_end;
        while (entrance > 0 && values[entrance - 1] <= rep.c_star) --entrance;
        rep.entrance_time = times[entrance];
    }
    return rep;
}

}  // namespace elreg
