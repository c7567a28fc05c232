#ifndef KDV_SPECTRAL_OPS_HPP
#define KDV_SPECTRAL_OPS_HPP

#include "kdv/field.hpp"

namespace kdv {

/**
 * Airy semigroup e^{t*dx^3}: multiplies wavenumber l by e^{-i*t*l^3}.
 * Pass a negative t for the free flow e^{-t*dx^3} used by the schemes
 * (e.g. apply_semigroup(u, -tau) propagates u forward by tau under
 * u_t + u_xxx = 0).  Unitary on the active band; the Nyquist bin is zeroed.
 * Example: apply_semigroup(cos(x), -tau) = cos(x + tau).
 */
Field apply_semigroup(const Field& f, double t);

/**
 * Spectral derivative d^m/dx^m: multiplies wavenumber l by (i*l)^m.
 * m >= 1.  Bin 0 and the Nyquist bin are zeroed.
 */
Field derivative(const Field& f, int m = 1);

/**
 * Spectral antiderivative dx^{-m}: multiplies wavenumber l by (i*l)^{-m}
 * for l != 0 and drops bin 0 (the mean) and the Nyquist bin.  On the active
 * band derivative(inverse_derivative(f, m), m) reproduces f minus its mean.
 * Example: inverse_derivative(sin(x)) = -cos(x).
 */
Field inverse_derivative(const Field& f, int m = 1);

/**
 * Sobolev norm ||f||_{H^gamma} = (sum_l (1+l^2)^gamma |f_hat(l)|^2)^{1/2}
 * over all bins.  gamma = 0 is the L^2-type norm with ||sin|| = 1/sqrt(2);
 * gamma may be negative for data rougher than L^2.
 */
double sobolev_norm(const Field& f, double gamma);

/** Conserved mass: integral of f over the torus, 2*pi*mean. */
double mass(const Field& f);

/**
 * Pointwise product.  With dealias = false this is the plain collocation
 * product (a circular mod-N convolution in coefficient space, the library
 * default).  With dealias = true the factors are zero-padded to a grid of
 * ceil(3N/2) points, multiplied there, and truncated back, which removes all
 * aliasing from quadratic products of fields on the active band.
 */
Field multiply(const Field& f, const Field& g, bool dealias = false);

/**
 * Spatial translation: shift(f, a)(x) = f(x - a), via phases e^{-i*l*a}.
 * Example: shift(sin(x), pi/2) = sin(x - pi/2) = -cos(x).
 */
Field shift(const Field& f, double a);

/**
 * Trigonometric interpolant of f at an arbitrary point y, by direct summation
 * of the coefficient series.  The Nyquist bin is rendered as its cosine
 * representative Re(c_{-N/2}) * cos(N/2 * y), which makes the interpolant
 * agree with samples() at every grid point.
 */
double evaluate_offgrid(const Field& f, double y);

/** Derivative of the trigonometric interpolant at y. */
double evaluate_offgrid_derivative(const Field& f, double y);

/**
 * Evaluates the interpolant and its derivative at y in one pass.  The complex
 * exponentials are built by a rotation recurrence, so a call costs O(N)
 * multiplies and two transcendental evaluations; Newton iterations on the
 * interpolant should use this rather than two separate calls.
 */
void evaluate_offgrid_both(const Field& f, double y, double* value, double* deriv);

} // namespace kdv

#endif
