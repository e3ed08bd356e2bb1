#pragma once

#include <filesystem>

#include "acpd/types.hpp"

namespace acpd {

/// Plain-text point file: one point per line, whitespace-separated decimal
/// fields, lines starting with '#' (and blank lines) ignored. The dimension is
/// inferred from the first data line. Parse errors report the line number.
PointSet read_point_file(const std::filesystem::path& path);

/// Full-precision writer; read_point_file round-trips the values exactly.
void write_point_file(const std::filesystem::path& path, const PointSet& pts);

}  // namespace acpd
