#include "lim/cli/csv.hpp"

#include "lim/core/errors.hpp"
#include "lim/samplers/trace_io.hpp"

namespace lim {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

CsvWriter::CsvWriter(const std::string& path, const std::string& table, std::vector<std::string> columns)
    : path_(path), out_(path, std::ios::binary), ncol_(columns.size()) {
    if (!out_) throw Error("cannot write " + path);
    out_ << "# " << kCsvSchema << " " << table << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << csv_escape(columns[i]);
    out_ << "\n";
}

void CsvWriter::cell(const std::string& s) {
    if (cur_ >= ncol_) throw Error(path_ + ": too many cells in a row");
    if (cur_) out_ << ',';
    out_ << s;
    ++cur_;
}

CsvWriter& CsvWriter::operator<<(double v) {
    cell(fmt_double(v));
    return *this;
}

CsvWriter& CsvWriter::operator<<(long long v) {
    cell(std::to_string(v));
    return *this;
}

CsvWriter& CsvWriter::operator<<(std::size_t v) {
    cell(std::to_string(v));
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
    cell(csv_escape(v));
    return *this;
}

void CsvWriter::end_row() {
    if (cur_ != ncol_) throw Error(path_ + ": row has " + std::to_string(cur_) + " cells, header has " +
                                   std::to_string(ncol_));
    out_ << '\n';
    cur_ = 0;
}

void CsvWriter::close() {
    out_.flush();
    if (!out_) throw Error("write failed: " + path_);
    out_.close();
}

} // namespace lim
