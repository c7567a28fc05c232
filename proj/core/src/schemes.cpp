#include "kdv/schemes.hpp"

#include "kdv/errors.hpp"
#include "kdv/spectral_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace kdv {

namespace {

using cplx = std::complex<double>;

void validate_config(const SchemeConfig& cfg) {
    if (!(cfg.tau > 0.0) || !std::isfinite(cfg.tau))
        throw std::invalid_argument("SchemeConfig: tau must be positive and finite");
    if (!(cfg.newton_tol > 0.0))
        throw std::invalid_argument("SchemeConfig: newton_tol must be positive");
    if (cfg.newton_max_iter < 1)
        throw std::invalid_argument("SchemeConfig: newton_max_iter must be >= 1");
}

void require_zero_mean(const Field& u) {
    if (std::abs(u.coeffs()[0]) > 1e-12)
        throw NonZeroMeanError(
            "integrator step requires zero-mean input; call reduce_mean first");
}

// Clears bin 0: the interaction terms are defined with their zero mode
// removed, which is what keeps the mean exactly conserved.
Field drop_mean(const Field& f) {
    auto c = f.coeffs();
    c[0] = 0.0;
    return Field::from_coeffs(f.grid(), std::move(c));
}

// Clears bin 0 and the Nyquist bin of an interaction term before it is added
// to the update; products deposit into both, neither belongs to the scheme's
// state space.
Field interaction_projection(const Field& f) {
    auto c = f.coeffs();
    c[0] = 0.0;
    c[f.grid()->nyquist_bin()] = 0.0;
    return Field::from_coeffs(f.grid(), std::move(c));
}

Field lri_core(const Field& u, const SchemeConfig& cfg, bool second_order) {
    validate_config(cfg);
    require_zero_mean(u);
    const double tau = cfg.tau;
    const bool d = cfg.dealias;

    // First Duhamel iterate, integrated exactly:
    // J1 = (1/3)(e^{-tau dx^3} dx^{-1}u)^2 - (1/3) e^{-tau dx^3}(dx^{-1}u)^2.
    Field p1 = inverse_derivative(u);
    Field a = apply_semigroup(p1, -tau);
    Field j1 = (1.0 / 3.0) * (multiply(a, a, d) -
                              apply_semigroup(multiply(p1, p1, d), -tau));

    Field result = apply_semigroup(u, -tau) + 0.5 * interaction_projection(j1);
    if (!second_order) return result;

    // Second Duhamel iterate.  The three J2 terms individually are O(tau);
    // their sum is O(tau^2) by the same cancellation that produces the k = 1
    // filtered-integral identity.
    Field w = multiply(u, u, d);
    Field wz = drop_mean(w);
    Field b = apply_semigroup(wz, -tau);
    Field t1 = (tau / 6.0) * multiply(a, b, d);

    Field c2 = apply_semigroup(inverse_derivative(u, 2), -tau);
    Field d2 = apply_semigroup(inverse_derivative(w), -tau);
    Field t2 = (-1.0 / 18.0) * inverse_derivative(multiply(c2, d2, d));

    Field e2 = inverse_derivative(u, 2);
    Field f2 = inverse_derivative(w);
    Field t3 = (1.0 / 18.0) * apply_semigroup(inverse_derivative(multiply(e2, f2, d)), -tau);

    return result + interaction_projection(t1 + t2 + t3);
}

} // namespace

std::pair<Field, double> reduce_mean(const Field& u0) {
    auto c = u0.coeffs();
    const double mean = c[0].real();
    c[0] = 0.0;
    return {Field::from_coeffs(u0.grid(), std::move(c)), mean};
}

Field reconstruct_mean(const Field& u_tilde, double c, double t) {
    Field shifted = shift(u_tilde, -c * t);
    auto coeffs = shifted.coeffs();
    coeffs[0] += c;
    return Field::from_coeffs(u_tilde.grid(), std::move(coeffs));
}

Field lri1_step(const Field& u, double /*t_n*/, const SchemeConfig& cfg) {
    return lri_core(u, cfg, false);
}

Field lri2_step(const Field& u, double /*t_n*/, const SchemeConfig& cfg) {
    return lri_core(u, cfg, true);
}

Field burgers_exact_step(const Field& u, double tau, const SchemeConfig& cfg,
                         BurgersStats* stats) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw std::invalid_argument("burgers_exact_step: tau must be positive and finite");
    const auto& grid = u.grid();
    const std::size_t n = grid->size();
    std::vector<double> out(n);
    BurgersStats local;

    for (std::size_t j = 0; j < n; ++j) {
        const double xj = grid->point(j);
        double y = xj; // identity initial guess
        double value = 0.0, deriv = 0.0, residual = 0.0;
        bool converged = false;
        int iter = 0;
        for (; iter <= cfg.newton_max_iter; ++iter) {
            evaluate_offgrid_both(u, y, &value, &deriv);
            residual = y - tau * value - xj;
            if (std::abs(residual) <= cfg.newton_tol) {
                converged = true;
                break;
            }
            const double fprime = 1.0 - tau * deriv;
            if (fprime <= 0.0)
                throw CharacteristicCrossingError(
                    j, "characteristics cross within the step at grid index " +
                           std::to_string(j) + " (1 - tau*u' <= 0); reduce tau");
            y -= residual / fprime;
        }
        if (!converged)
            throw NewtonDivergedError(
                j, std::abs(residual),
                "characteristic solve did not reach tolerance at grid index " +
                    std::to_string(j) + " (|F| = " + std::to_string(std::abs(residual)) +
                    "); reduce tau");
        out[j] = value;
        local.max_iterations = std::max(local.max_iterations, iter);
        local.max_residual = std::max(local.max_residual, std::abs(residual));
    }
    if (stats) *stats = local;
    return Field::from_samples(grid, std::move(out));
}

Field strang_step(const Field& u, double /*t_n*/, const SchemeConfig& cfg,
                  BurgersStats* stats) {
    validate_config(cfg);
    Field half = apply_semigroup(u, -cfg.tau / 2.0);
    Field mid = burgers_exact_step(half, cfg.tau, cfg, stats);
    return apply_semigroup(mid, -cfg.tau / 2.0);
}

Field scheme_step(const Field& u, double t_n, const SchemeConfig& cfg) {
    switch (cfg.kind) {
        case SchemeKind::lri2: return lri2_step(u, t_n, cfg);
        case SchemeKind::lri1: return lri1_step(u, t_n, cfg);
        case SchemeKind::strang: return strang_step(u, t_n, cfg);
    }
    throw std::invalid_argument("scheme_step: unknown scheme kind");
}

SolverState evolve(const Field& u0, double T, const SchemeConfig& cfg,
                   const StepCallback& callback) {
    validate_config(cfg);
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("evolve: T must be positive and finite");

    const double ratio = T / cfg.tau;
    const double steps_d = std::round(ratio);
    const double ulp = std::nextafter(ratio, std::numeric_limits<double>::infinity()) - ratio;
    if (steps_d < 1.0 || std::abs(ratio - steps_d) > 0.5 * ulp)
        throw NonIntegerStepCountError(
            "evolve: T/tau = " + std::to_string(ratio) +
            " is not an integer step count (T must be an exact multiple of tau)");
    const long long steps = static_cast<long long>(steps_d);

    auto [u, c] = reduce_mean(u0);
    SolverState state;
    state.mean_offset = c;
    for (long long i = 0; i < steps; ++i) {
        u = scheme_step(u, static_cast<double>(i) * cfg.tau, cfg);
        state.u = u;
        state.step_count = i + 1;
        state.t = static_cast<double>(i + 1) * cfg.tau;
        if (callback) callback(state);
    }
    state.u = reconstruct_mean(u, c, static_cast<double>(steps) * cfg.tau);
    return state;
}

} // namespace kdv
