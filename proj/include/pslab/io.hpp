#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pslab {

// Shortest exact decimal form with 17 significant digits; CSV cells diff
// bit-exactly across reruns.
std::string format_real(double v);

// FNV-1a 64-bit, used for config hashes in manifests.
std::uint64_t fnv1a64(std::string_view data);

// Comma-separated, '.' decimal point, LF line endings, no quoting (cells never
// contain commas here). Content is buffered and written once.
class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void row(const std::vector<std::string>& cells);
    const std::string& content() const { return data_; }

  private:
    std::string data_;
    std::size_t columns_;
};

// Writes bytes exactly as given (binary mode).
void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace pslab
