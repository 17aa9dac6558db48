#include <cstdio>
#include <fstream>

#include "wkelab/errors.hpp"
#include "wkelab/harness.hpp"

namespace wkl {

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}
}  // namespace

void CsvTable::add(const Common& c, const std::vector<std::string>& keys, double value,
                   double stderr_value) {
    if (keys.size() != keys_.size()) throw std::logic_error("CsvTable: key count mismatch");
    std::string row = csv_field(c.experiment) + ',' + fmt_num(c.L) + ',' + std::to_string(c.d) +
                      ',' + fmt_num(c.T) + ',' + fmt_num(c.alpha);
    for (const auto& k : keys) row += ',' + csv_field(k);
    row += ',' + fmt_num(value) + ',' + fmt_num(stderr_value);
    rows_.push_back(std::move(row));
}

std::string CsvTable::str() const {
    std::string s = "experiment,L,d,T,alpha";
    for (const auto& k : keys_) s += ',' + csv_field(k);
    s += ",value,stderr\n";
    for (const auto& r : rows_) s += r + '\n';
    return s;
}

void CsvTable::write(const std::filesystem::path& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot write " + path.string());
    f << str();
}

}  // namespace wkl
