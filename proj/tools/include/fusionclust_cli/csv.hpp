#pragma once

#include <filesystem>
#include <string_view>

#include "fusionclust/data_matrix.hpp"

namespace fusionclust::cli {

/// Comma-separated numeric table. A first row whose fields are all
/// non-numeric is a header and skipped. Blank lines are ignored.
/// Throws ParseError (with the 1-based line) on ragged rows, non-numeric
/// or non-finite fields, and on input without data rows.
DataMatrix parse_csv(std::string_view text);

/// parse_csv on the contents of `path`; ParseError when unreadable.
DataMatrix read_csv(const std::filesystem::path& path);

}  // namespace fusionclust::cli
