#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nesslat {

// Reproducible text formatting: 17 significant digits round-trips a double.
inline std::string fmt_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using CsvCell = std::variant<long, double, std::string>;

// Frozen-schema CSV writer: header fixed at construction, '\n' line ends,
// doubles in %.17g so identical data gives identical bytes.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns)
        : out_(path, std::ios::binary), ncols_(columns.size()) {
        if (!out_) throw std::runtime_error("cannot open for writing: " + path);
        for (size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << '\n';
    }

    void row(const std::vector<CsvCell>& cells) {
        if (cells.size() != ncols_) throw std::logic_error("csv row width mismatch");
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) out_ << fmt_g17(v);
                    else out_ << v;
                },
                cells[i]);
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
    size_t ncols_;
};

// FNV-1a, for content hashes recorded in run manifests.
inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace nesslat
