#ifndef KDV_SCHEMES_HPP
#define KDV_SCHEMES_HPP

#include "kdv/field.hpp"

#include <functional>
#include <utility>

namespace kdv {

/**
 * Time steppers for the KdV equation
 *
 *     u_t + u_xxx = (1/2) (u^2)_x   on the 2*pi torus,
 *
 * written against the twisted (interaction-picture) variable so that the
 * linear flow is integrated exactly and only the quadratic interaction is
 * discretized:
 *
 *   lri1: first-order exponential integrator.  One Duhamel iteration with
 *         the nonlinear phase integrated in closed form via the cubic
 *         resonance identity (k1+k2)^3 - k1^3 - k2^3 = 3(k1+k2)k1k2.
 *         First order in time for H^3 data.
 *
 *   lri2: second-order low-regularity integrator.  Adds the second Duhamel
 *         iterate, again integrated in closed form.  Second order in time
 *         for H^4 data, i.e. four derivatives below what classical
 *         exponential methods need.
 *
 *   strang: Strang splitting between the Airy flow (exact in Fourier space)
 *         and the Burgers flow (exact via characteristics, with Newton
 *         iteration for the characteristic foot points).  Second order for
 *         smooth data; loses stable order on rough data.
 *
 * The integrator steps require zero-mean input: the antiderivative symbols
 * are only defined on mean-free fields.  Nonzero-mean initial data is
 * handled by the Galilean reduction reduce_mean / reconstruct_mean, which
 * evolve() applies automatically.
 */

enum class SchemeKind { lri2, lri1, strang };

struct SchemeConfig {
    SchemeKind kind = SchemeKind::lri2;
    double tau = 0.0;             // time step, > 0
    bool dealias = false;         // 3/2-rule padding for quadratic products
    double newton_tol = 1e-13;    // characteristic solve: stop when |F| <= tol
    int newton_max_iter = 50;
};

/** Per-step diagnostics of the characteristic solve. */
struct BurgersStats {
    int max_iterations = 0;   // worst grid point
    double max_residual = 0.0; // largest accepted |F|
};

struct SolverState {
    Field u;                  // zero-mean while a mean offset is extracted
    double t = 0.0;           // always step_count * tau
    long long step_count = 0;
    double mean_offset = 0.0; // the extracted mean c
};

/**
 * Galilean reduction: returns (u0 - c, c) with c = mean(u0).  The first
 * component has exactly zero mean (bin 0 is cleared in coefficient space).
 */
std::pair<Field, double> reduce_mean(const Field& u0);

/**
 * Inverse of the reduction after evolving for time t: if w solves KdV with
 * zero-mean data then w(t, x + c*t) + c solves KdV with the mean restored,
 * so the reconstruction is shift(u_tilde, -c*t) + c.
 */
Field reconstruct_mean(const Field& u_tilde, double c, double t);

/**
 * One step of the first-order integrator:
 *
 *   u^{n+1} = e^{-tau dx^3} u^n + (1/2) I1,
 *   I1 = P[ (1/3)(e^{-tau dx^3} dx^{-1} u)^2
 *          - (1/3) e^{-tau dx^3} (dx^{-1} u)^2 ],
 *
 * where P removes the zero mode (and the Nyquist bin, per the grid's
 * operator convention).  The update is autonomous in u, so t_n does not
 * enter; the parameter is kept for interface symmetry and telemetry.
 */
Field lri1_step(const Field& u, double t_n, const SchemeConfig& cfg);

/**
 * One step of the second-order integrator: the lri1 update plus
 *
 *   I2 = P[ (tau/6) (e^{-tau dx^3} dx^{-1} u) (e^{-tau dx^3} (u^2 - mean(u^2)))
 *          - (1/18) dx^{-1}( (e^{-tau dx^3} dx^{-2} u) (e^{-tau dx^3} dx^{-1} u^2) )
 *          + (1/18) e^{-tau dx^3} dx^{-1}( (dx^{-2} u) (dx^{-1} u^2) ) ].
 */
Field lri2_step(const Field& u, double t_n, const SchemeConfig& cfg);

/**
 * Exact-in-time Burgers step u_t = (1/2)(u^2)_x by characteristics: for each
 * grid point x_j, Newton-solve F(y) = y - tau*u(y) - x_j = 0 starting from
 * y = x_j, then set the new value to u(y).  Throws CharacteristicCrossingError
 * if 1 - tau*u'(y) <= 0 at an iterate and NewtonDivergedError if |F| fails to
 * reach cfg.newton_tol within cfg.newton_max_iter iterations.  Does not
 * require zero mean.
 */
Field burgers_exact_step(const Field& u, double tau, const SchemeConfig& cfg,
                         BurgersStats* stats = nullptr);

/** Strang step: Airy half step, Burgers full step, Airy half step. */
Field strang_step(const Field& u, double t_n, const SchemeConfig& cfg,
                  BurgersStats* stats = nullptr);

/** Dispatches on cfg.kind. */
Field scheme_step(const Field& u, double t_n, const SchemeConfig& cfg);

using StepCallback = std::function<void(const SolverState&)>;

/**
 * Integrates u0 to time T with fixed step cfg.tau: reduces the mean once,
 * takes round(T/tau) steps (T/tau must be an integer to 0.5 ulp, else
 * NonIntegerStepCountError), invokes the callback after every step with the
 * reduced in-flight state, and returns the final state with the mean
 * reconstructed.
 */
SolverState evolve(const Field& u0, double T, const SchemeConfig& cfg,
                   const StepCallback& callback = {});

} // namespace kdv

#endif
