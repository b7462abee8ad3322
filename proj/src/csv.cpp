#include "rydfloq/series.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace rydfloq {

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

ObservableSeries::ObservableSeries(std::vector<std::string> names)
    : names_(std::move(names)), columns_(names_.size())
{
}

void ObservableSeries::push(double t, const std::vector<double>& row)
{
    if (row.size() != names_.size()) throw std::invalid_argument("row width does not match series columns");
    if (!times_.empty() && !(t > times_.back()))
        throw std::invalid_argument("series times must increase strictly");
    times_.push_back(t);
    for (std::size_t k = 0; k < row.size(); ++k) columns_[k].push_back(row[k]);
}

const std::vector<double>& ObservableSeries::column(const std::string& name) const
{
    for (std::size_t k = 0; k < names_.size(); ++k)
        if (names_[k] == name) return columns_[k];
    throw std::out_of_range("no column '" + name + "'");
}

void ObservableSeries::write_csv(std::ostream& os, const std::string& time_label) const
{
    os << time_label;
    for (const auto& n : names_) os << ',' << n;
    os << '\n';
    for (std::size_t r = 0; r < times_.size(); ++r) {
        os << format_double(times_[r]);
        for (const auto& c : columns_) os << ',' << format_double(c[r]);
        os << '\n';
    }
}

nlohmann::json ObservableSeries::to_json() const
{
    nlohmann::json j;
    j["metadata"] = metadata_;
    j["times"] = times_;
    for (std::size_t k = 0; k < names_.size(); ++k) j["columns"][names_[k]] = columns_[k];
    return j;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row)
{
    std::vector<std::string> s;
    s.reserve(row.size());
    for (double x : row) s.push_back(format_double(x));
    add_row(s);
}

void CsvTable::add_row(const std::vector<std::string>& row)
{
    if (row.size() != header_.size()) throw std::invalid_argument("csv row width mismatch");
    for (const auto& cell : row)
        if (cell.find_first_of(",\n\r\"") != std::string::npos)
            throw std::invalid_argument("csv cell needs quoting: '" + cell + "'");
    rows_.push_back(row);
}

void CsvTable::write(std::ostream& os) const
{
    auto line = [&os](const std::vector<std::string>& v) {
        for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << v[k];
        os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

void CsvTable::save(const std::filesystem::path& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write(f);
}

void save_series_csv(const ObservableSeries& s, const std::filesystem::path& path, const std::string& time_label)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    s.write_csv(f, time_label);
}

}  // namespace rydfloq
