#pragma once

// Matrix Market reader/writer.  Coordinate and array formats, real /
// integer / complex fields, general / symmetric / hermitian /
// skew-symmetric storage.  Parse failures carry the 1-based source line.
// Export is canonical: array layout for dense-tagged matrices, coordinate
// with (row, col)-sorted entries for sparse ones, %.17g throughout so values
// round-trip bit-exactly.

#include "eigsim/complex_matrix.hpp"

#include <iosfwd>
#include <string>

namespace eigsim {

ComplexMatrix parse_matrix_market(std::istream& in, const std::string& source_name);
ComplexMatrix ingest_matrix(const std::string& path);

std::string to_matrix_market(const ComplexMatrix& m);
void export_matrix(const ComplexMatrix& m, const std::string& path);

}  // namespace eigsim
