#ifndef KDV_FIELD_IO_HPP
#define KDV_FIELD_IO_HPP

#include "kdv/field.hpp"

#include <string>
#include <vector>

namespace kdv {

/**
 * On-disk field format:
 *
 *   # kdv-field N=<N>
 *   <sample 0>
 *   ...
 *   <sample N-1>
 *
 * One sample per line in full-precision scientific notation (round-trip
 * exact).  Additional '#' comment lines may follow the header before the
 * samples; readers preserve them, which is how the reference cache stores its
 * provenance line.  Readers reject a malformed header, a sample count that
 * does not match the header, non-finite values, and (when the caller supplies
 * a grid) a mismatched N.
 */

/** Writes atomically: a temporary file in the same directory, then rename. */
void write_field_file(const std::string& path, const Field& f,
                      const std::vector<std::string>& extra_comments = {});

struct FieldFileData {
    std::size_t n = 0;
    std::vector<double> samples;
    std::vector<std::string> comments; // comment lines after the header, verbatim
};

FieldFileData read_field_file(const std::string& path);

/**
 * Reads a field.  With a null grid a fresh grid of the file's N is created;
 * otherwise the file must match the supplied grid.
 */
Field read_field(const std::string& path,
                 std::shared_ptr<const SpectralGrid> grid = nullptr);

} // namespace kdv

#endif
