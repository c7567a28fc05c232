#ifndef KDV_ORACLES_HPP
#define KDV_ORACLES_HPP

#include "kdv/field.hpp"

#include <string>

namespace kdv {

/**
 * Independent reference implementations used to pin down the fast solvers.
 * Everything here favors transparency over speed: direct O(N^2) mode loops,
 * per-pair closed-form kernels, and quadrature, with no FFTs in the update
 * paths.
 */

enum class OracleOrder { first, second };

/**
 * One integrator step computed mode pair by mode pair.  For each ordered
 * pair of active wavenumbers (l1, l2) the interaction kernel is evaluated in
 * closed form (the time integral of the Duhamel phase e^{-i s 3 l l1 l2},
 * with l = l1 + l2 wrapped mod N) and deposited into the wrapped output bin;
 * the quadratic coefficient array is built by direct circular convolution.
 * Wrapped (aliased) pairs follow the same grid semantics as the collocation
 * product, so the result matches lri1_step/lri2_step (dealias off) to
 * rounding error while sharing no code path with them.
 *
 * tau may be negative (integrating backwards).  The update is autonomous in
 * u, so t_n does not affect the result; the parameter mirrors the scheme
 * interface.  Grids above N = 256 are refused unless allow_large is set:
 * the cost is O(N^2) kernel evaluations and this is a verification tool.
 */
Field duhamel_oracle_step(const Field& u, double t_n, double tau, OracleOrder order,
                          bool allow_large = false);

/**
 * Closed-form value of the filtered oscillatory integral
 *
 *   integral_0^tau s^k e^{(t_n+s) dx^3} dx [ e^{-(t_n+s) dx^3} f
 *                                          * e^{-(t_n+s) dx^3} g ] ds
 *
 * for k = 0 (exact antiderivative via the cubic resonance identity) and
 * k = 1 (one integration by parts; the remaining non-oscillatory-in-phase
 * residual integral, which carries no outer derivative, is evaluated with
 * 32-node Gauss-Legendre quadrature).  f and g must have zero mean and be
 * band-limited so the quadratic products are alias-free
 * (max_mode(f) + max_mode(g) <= N/2 - 1).
 */
Field filtered_integral_closed_form(const Field& f, const Field& g, double t_n,
                                    double tau, int k);

/**
 * Checks the second-time-derivative identity for the twisted variable
 * v(t) = e^{t dx^3} u(t):
 *
 *   d^2 v / dt^2 = (3/2) e^{t dx^3} dx^2 (e^{-t dx^3} dx v)^2
 *                + (1/3) e^{t dx^3} dx^2 (e^{-t dx^3} v)^3.
 *
 * The left side is approximated by a centered second difference of v built
 * from fine-substep oracle integrations to t +/- epsilon; the right side
 * is evaluated directly with dealiased products.  Returns the L^2-type norm
 * of the difference, which is O(epsilon^2): halving epsilon should shrink
 * it by a factor of about 4.  v must have zero mean and satisfy
 * 3 * max_mode(v) <= N/2 - 1 so the cubic products are alias-free.
 */
double second_derivative_identity_residual(const Field& v, double t, double epsilon);

/**
 * Fine-step reference solution at time T, computed with the second-order
 * integrator at step tau_ref and cached on disk keyed by (hash of u0, T,
 * tau_ref).  A cache hit returns the stored field; a miss (or an unreadable
 * cache entry) computes and stores it atomically.  Pass an empty cache_dir
 * to disable caching.
 */
Field reference_solution(const Field& u0, double T, double tau_ref,
                         const std::string& cache_dir);

} // namespace kdv

#endif
