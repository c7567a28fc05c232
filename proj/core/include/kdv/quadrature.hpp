#ifndef KDV_QUADRATURE_HPP
#define KDV_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace kdv {

/**
 * Gauss-Legendre quadrature rule with n nodes on a caller-chosen interval.
 *
 * Nodes are roots of the Legendre polynomial P_n, found by Newton iteration
 * on the three-term recurrence; node/weight accuracy is at machine level for
 * the n <= 128 used here.  An n-node rule integrates polynomials of degree
 * 2n-1 exactly; for the oscillatory integrands in this library the practical
 * resolution envelope is |phase derivative| * interval <= ~66 (n = 32) and
 * <= ~150 (n = 64) at 1e-12 absolute accuracy.
 */
class GaussLegendre {
  public:
    explicit GaussLegendre(std::size_t n);

    /** Nodes on [-1,1], ascending. */
    const std::vector<double>& nodes() const { return nodes_; }
    /** Weights matching nodes(). */
    const std::vector<double>& weights() const { return weights_; }

    /** Node i mapped to [a,b]. */
    double node_on(double a, double b, std::size_t i) const {
        return 0.5 * (b - a) * nodes_[i] + 0.5 * (a + b);
    }
    /** Weight i mapped to [a,b]. */
    double weight_on(double a, double b, std::size_t i) const {
        return 0.5 * (b - a) * weights_[i];
    }

    std::size_t size() const { return nodes_.size(); }

  private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

} // namespace kdv

#endif
