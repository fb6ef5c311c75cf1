#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace degen {

/// Shortest 17-significant-digit decimal; the one float format used in every
/// emitted document so identical runs stay byte-identical.
std::string fmt17(double v);

/// FNV-1a 64-bit content hash for embedding input fingerprints in documents.
std::uint64_t fnv1a(std::string_view data);
std::string hash_hex(std::string_view data);

/// Minimal structured-text document: sections, key/value lines, fixed-width
/// tables. Purely deterministic output.
class ReportDoc {
public:
    explicit ReportDoc(std::string title);

    void section(const std::string& name);
    void kv(const std::string& key, const std::string& value);
    void kv(const std::string& key, const char* value);
    void kv(const std::string& key, double value);
    void kv(const std::string& key, bool value);
    void kv(const std::string& key, long value);
    void kv(const std::string& key, int value);
    void table(const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);
    void raw(const std::string& block);

    const std::string& str() const { return text_; }
    void write(const std::string& path) const;

private:
    std::string text_;
};

} // namespace degen
