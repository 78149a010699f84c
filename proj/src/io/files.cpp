#include "lingdim/io/files.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "lingdim/error.hpp"

namespace lingdim::io {

namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, const std::string& content, bool overwrite) {
  if (!overwrite && fs::exists(path)) {
    throw IoError(path.string() + " already exists (pass --force to replace it)");
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  const fs::path tmp = path.string() + ".partial-" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  if (overwrite) {
    fs::rename(tmp, path, ec);
  } else {
    // A hard link fails if the target appeared meanwhile, giving exclusive creation.
    fs::create_hard_link(tmp, path, ec);
    fs::remove(tmp);
  }
  if (ec) {
    const std::string reason = ec.message();
    fs::remove(tmp, ec);
    throw IoError("cannot move output into place at " + path.string() + ": " + reason);
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace lingdim::io
