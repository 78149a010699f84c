#ifndef LINGDIM_IO_FILES_HPP
#define LINGDIM_IO_FILES_HPP

#include <filesystem>
#include <string>

namespace lingdim::io {

/// Writes `content` to a sibling temp file and renames it into place, so a
/// failed run never leaves a half-written output behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& content, bool overwrite);

std::string read_file(const std::filesystem::path& path);

}  // namespace lingdim::io

#endif  // LINGDIM_IO_FILES_HPP
