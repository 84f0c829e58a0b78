#include "dsf/io.hpp"

#include <chrono>
#include <cstdio>
#include <stdexcept>

namespace dsf {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) line += ",";
        line += quote(header[i]);
    }
    write_line(line);
}

std::string CsvWriter::quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string q = "\"";
    for (char c : field) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    return q + "\"";
}

void CsvWriter::write_line(const std::string& line) {
    out_ << line << "\n";
    if (!out_) throw std::runtime_error("CsvWriter: write failed for " + path_);
}

void CsvWriter::close() {
    if (out_.is_open()) out_.close();
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("file_checksum: cannot open " + path);
    std::uint64_t h = 0xCBF29CE484222325ull;
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ull;
        }
        if (!in) break;
    }
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a:") + hex;
}

bool files_identical(const std::string& a, const std::string& b) {
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    if (!fa || !fb) return false;
    char ca, cb;
    while (true) {
        const bool ga = static_cast<bool>(fa.get(ca));
        const bool gb = static_cast<bool>(fb.get(cb));
        if (ga != gb) return false;
        if (!ga) return true;
        if (ca != cb) return false;
    }
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace dsf
