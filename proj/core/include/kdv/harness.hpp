#ifndef KDV_HARNESS_HPP
#define KDV_HARNESS_HPP

#include "kdv/errors.hpp"
#include "kdv/field.hpp"
#include "kdv/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace kdv {

/** Canonical name of a scheme ("lri2", "lri1", "strang"). */
const char* scheme_name(SchemeKind kind);

/** Inverse of scheme_name; throws std::invalid_argument on unknown names. */
SchemeKind scheme_from_name(const std::string& name);

/**
 * Deterministic rough initial data of Sobolev regularity theta:
 * N uniform[0,1) samples from SplitMix64(seed) are transformed, wavenumber l
 * is damped by |l|^{-theta} (bin 0 and the Nyquist bin are cleared), and the
 * result is normalized to max|u0| = 1.  The mean is exactly zero; the same
 * (n, theta, seed) always reproduces the same field bit for bit.
 */
struct RoughDataSpec {
    std::size_t n = 0;
    double theta = 0.0;
    std::uint64_t seed = 0;
};

Field rough_data(const RoughDataSpec& spec,
                 std::shared_ptr<const SpectralGrid> grid = nullptr);

/** Initial data plus the metadata the CSV output carries. */
struct DataDescriptor {
    Field u0;
    double theta = std::numeric_limits<double>::quiet_NaN(); // NaN for smooth data
    std::string name;
};

DataDescriptor describe_rough(const RoughDataSpec& spec,
                              std::shared_ptr<const SpectralGrid> grid = nullptr);
DataDescriptor describe_smooth(std::string name, Field u0);

struct StudyOptions {
    bool dealias = false;
    std::string cache_dir;  // reference cache directory; empty disables caching
    int jobs = 1;           // parallel tau runs (the reference is computed first)
    double newton_tol = 1e-13;
    int newton_max_iter = 50;
};

/**
 * Result of a fixed-(scheme, data) convergence study over a tau ladder.
 * rel_errors[i] = ||u_ref - u_tau||_{H^gamma} / ||u_ref||_{H^gamma} at T;
 * NaN marks a run the scheme could not complete (recorded by
 * compare_schemes; convergence_study itself aborts instead).
 * observed_orders[i] compares taus[i] and taus[i+1].  Slope entries enter
 * mean_observed_order only when both errors sit above 10x the estimated
 * reference error (in_fit), so reference-limited points cannot fake an
 * order.
 */
struct ConvergenceReport {
    SchemeKind scheme = SchemeKind::lri2;
    double gamma = 0.0;
    double theta = std::numeric_limits<double>::quiet_NaN();
    double T = 0.0;
    double tau_ref = 0.0;
    std::string data_name;
    std::vector<double> taus;
    std::vector<double> rel_errors;
    std::vector<double> observed_orders; // size max(taus-1, 0)
    std::vector<double> wall_ms;
    std::vector<bool> dnf;
    std::vector<bool> in_fit;            // per observed_orders entry
    double mean_observed_order = std::numeric_limits<double>::quiet_NaN();
    bool aborted = false;
    std::string abort_reason;
};

/** Thrown by convergence_study when a run fails; carries the partial report. */
class StudyAbortedError : public Error {
  public:
    StudyAbortedError(std::string msg, ConvergenceReport partial, double offending_tau)
        : Error(std::move(msg)), partial_(std::move(partial)), offending_tau_(offending_tau) {}
    const ConvergenceReport& partial() const { return partial_; }
    double offending_tau() const { return offending_tau_; }

  private:
    ConvergenceReport partial_;
    double offending_tau_;
};

/**
 * Runs the scheme over a strictly decreasing tau ladder (each dividing T)
 * against a cached fine reference at tau_ref (tau_ref <= min(taus)/10).
 * A failed run raises StudyAbortedError identifying the offending tau and
 * carrying the rows completed before the failure.
 */
ConvergenceReport convergence_study(SchemeKind scheme, double gamma,
                                    const DataDescriptor& data, double T,
                                    const std::vector<double>& taus, double tau_ref,
                                    const StudyOptions& options = {});

/**
 * One-step (local) error study at state u0: for each tau the scheme's single
 * step is compared with a 128-substep fine integration of the same interval.
 * Slopes are computed exactly like observed_orders; the expected slope is
 * (order + 1): 3 for lri2, 2 for lri1 on smooth data.
 */
struct LocalErrorReport {
    SchemeKind scheme = SchemeKind::lri2;
    double gamma = 0.0;
    std::vector<double> taus;
    std::vector<double> errors;
    std::vector<double> slopes;
    double mean_slope = std::numeric_limits<double>::quiet_NaN();
};

LocalErrorReport local_error_study(SchemeKind scheme, double gamma,
                                   const DataDescriptor& data, double t_n,
                                   const std::vector<double>& taus,
                                   const StudyOptions& options = {});

/**
 * Convergence studies for several schemes on the same data and tau ladder,
 * sharing one reference solve.  Individual run failures do not abort the
 * comparison; they are recorded as DNF rows (rel_error NaN).
 */
struct CompareReport {
    std::vector<ConvergenceReport> reports;
};

CompareReport compare_schemes(double gamma, const DataDescriptor& data, double T,
                              const std::vector<double>& taus, double tau_ref,
                              const std::vector<SchemeKind>& schemes =
                                  {SchemeKind::lri2, SchemeKind::lri1, SchemeKind::strang},
                              const StudyOptions& options = {});

/**
 * CSV emission.  Header: scheme,gamma,theta,T,tau,rel_error,observed_order,wall_ms.
 * observed_order is blank on the first row of each scheme; DNF cells are the
 * literal token NaN, never blank.  A report aborted mid-study ends with a
 * trailing "# ABORTED" comment line.
 */
void write_csv(std::ostream& out, const ConvergenceReport& report);
void write_csv(std::ostream& out, const CompareReport& report);

} // namespace kdv

#endif
