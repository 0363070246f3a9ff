#pragma once
#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

namespace lim {

inline constexpr const char* kCsvSchema = "limcmc-csv/1";

// CSV with a '#' schema comment line, a header row, LF endings and 17-digit doubles.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& table, std::vector<std::string> columns);
    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(long long v);
    CsvWriter& operator<<(std::size_t v);
    CsvWriter& operator<<(int v) { return *this << static_cast<long long>(v); }
    CsvWriter& operator<<(const std::string& v);
    CsvWriter& operator<<(const char* v) { return *this << std::string(v); }
    // Ends the row; throws when the cell count differs from the header.
    void end_row();
    void close();
    const std::string& path() const { return path_; }

  private:
    void cell(const std::string& s);
    std::string path_;
    std::ofstream out_;
    std::size_t ncol_, cur_ = 0;
};

std::string csv_escape(const std::string& s);

} // namespace lim
