#ifndef KDV_ERRORS_HPP
#define KDV_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kdv {

/** Base class for all library errors. */
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/** Two fields living on different grids were combined. */
class GridMismatchError : public Error {
  public:
    using Error::Error;
};

/** A zero-mean precondition was violated; the caller should reduce_mean first. */
class NonZeroMeanError : public Error {
  public:
    using Error::Error;
};

/** T/tau is not an integer number of steps. */
class NonIntegerStepCountError : public Error {
  public:
    using Error::Error;
};

/** Newton iteration for the characteristic foot point failed to converge. */
class NewtonDivergedError : public Error {
  public:
    NewtonDivergedError(std::size_t grid_index, double residual, const std::string& msg)
        : Error(msg), grid_index_(grid_index), residual_(residual) {}
    std::size_t grid_index() const { return grid_index_; }
    double residual() const { return residual_; }

  private:
    std::size_t grid_index_;
    double residual_;
};

/** Characteristics crossed within the step (1 - tau*u0'(y) <= 0 at an iterate). */
class CharacteristicCrossingError : public Error {
  public:
    CharacteristicCrossingError(std::size_t grid_index, const std::string& msg)
        : Error(msg), grid_index_(grid_index) {}
    std::size_t grid_index() const { return grid_index_; }

  private:
    std::size_t grid_index_;
};

/** The brute-force oracle was asked for a grid above its cost guard. */
class OracleCostGuardError : public Error {
  public:
    using Error::Error;
};

/** A field file failed validation (header, count, finiteness). */
class FieldFormatError : public Error {
  public:
    using Error::Error;
};

} // namespace kdv

#endif
