#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>

namespace emt::cli {

/// Writes through a temporary file in the target directory and renames it
/// over `path` once the stream has been flushed. Throws Error(IoError).
void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body);

} // namespace emt::cli
