#include "emt/output.hpp"

#include "emt/error.hpp"

#include <fstream>
#include <system_error>

namespace emt::cli {

void write_atomic(const std::filesystem::path& path,
                  const std::function<void(std::ostream&)>& body) {
  namespace fs = std::filesystem;
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::IoError, "cannot open " + tmp.string() + " for writing");
    body(out);
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::IoError, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

} // namespace emt::cli
