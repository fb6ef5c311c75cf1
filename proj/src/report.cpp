#include "degenlab/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace degen {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::string_view data) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(data)));
    return buf;
}

ReportDoc::ReportDoc(std::string title) { text_ = title + "\n"; }

void ReportDoc::section(const std::string& name) { text_ += "\n[" + name + "]\n"; }

void ReportDoc::kv(const std::string& key, const std::string& value) {
    text_ += key + ": " + value + "\n";
}
void ReportDoc::kv(const std::string& key, const char* value) { kv(key, std::string(value)); }
void ReportDoc::kv(const std::string& key, double value) { kv(key, fmt17(value)); }
void ReportDoc::kv(const std::string& key, bool value) { kv(key, std::string(value ? "true" : "false")); }
void ReportDoc::kv(const std::string& key, long value) { kv(key, std::to_string(value)); }
void ReportDoc::kv(const std::string& key, int value) { kv(key, std::to_string(value)); }

void ReportDoc::table(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    std::string header = "  ";
    for (std::size_t c = 0; c < columns.size(); ++c)
        header += (c ? "," : "") + columns[c];
    text_ += header + "\n";
    for (const auto& row : rows) {
        std::string line = "  ";
        for (std::size_t c = 0; c < row.size(); ++c) line += (c ? "," : "") + fmt17(row[c]);
        text_ += line + "\n";
    }
}

void ReportDoc::raw(const std::string& block) { text_ += block; }

void ReportDoc::write(const std::string& path) const {
    std::FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("ReportDoc::write: cannot open " + path);
    std::fwrite(text_.data(), 1, text_.size(), fp);
    std::fclose(fp);
}

} // namespace degen
