#pragma once

#include <string>

#include "bcode/image.hpp"  // IoError
#include "bcode/matrix.hpp"

namespace bcode {

// Headerless comma-separated matrix of reals ("." decimal point). Parse
// failures throw IoError naming the offending line.
Matrix read_csv(const std::string& path);
void write_csv(const std::string& path, const Matrix& m);

}  // namespace bcode
