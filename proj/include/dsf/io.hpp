#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace dsf {

/// Minimal RFC-4180 CSV writer: one header line, LF terminated rows, fields
/// quoted only when they need it (never for the numeric payloads we emit).
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    template <class... Ts>
    void row(const Ts&... fields) {
        std::ostringstream os;
        os.precision(17);
        bool first = true;
        ((os << (first ? "" : ",") << fields, first = false), ...);
        write_line(os.str());
    }

    void close();
    const std::string& path() const { return path_; }

private:
    static std::string quote(const std::string& field);
    void write_line(const std::string& line);

    std::string path_;
    std::ofstream out_;
};

/// FNV-1a 64-bit digest of a file's bytes, as "fnv1a:<hex>".
std::string file_checksum(const std::string& path);

bool files_identical(const std::string& a, const std::string& b);

std::string utc_timestamp();

}  // namespace dsf
