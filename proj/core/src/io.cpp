#include "reidbench/io.hpp"

#include <fstream>

#include "reidbench/error.hpp"

namespace reidbench {

std::string read_file(const std::filesystem::path& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(std::string("cannot open ") + what + ": " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw DataError(std::string("error while reading ") + what + ": " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::string_view bytes, const char* what) {
    std::error_code ec;
    const std::filesystem::path parent = path.parent_path();
    if (!parent.empty()) {
        std::filesystem::create_directories(parent, ec);
        if (ec)
            throw DataError(std::string("cannot create directory for ") + what + ": " +
                            parent.string() + " (" + ec.message() + ")");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(std::string("cannot open ") + what + " for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw DataError(std::string("error while writing ") + what + ": " + path.string());
}

}  // namespace reidbench
