#pragma once

#include "glevy/cadlag_path.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace glevy {

/// Shortest decimal text that parses back to exactly the same double.
std::string formatShortest(double x);
/// Parses a full string as a double; throws InvalidInput otherwise.
double parseDouble(const std::string& text);

/// CSV record stream:
///
///     # horizon=<T>,dim=<d>
///     kind,time,v0,...,v{d-1}
///     sample,<t>,<c(t)>...
///     jump,<t>,<Delta>...
///
/// Numbers use the shortest round-trip representation, so reading a written
/// path gives back a bit-identical path.
void writePathCsv(std::ostream& out, const CadlagPath& path);
CadlagPath readPathCsv(std::istream& in);

void savePathCsv(const std::filesystem::path& file, const CadlagPath& path);
CadlagPath loadPathCsv(const std::filesystem::path& file);

}  // namespace glevy
