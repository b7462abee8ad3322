#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace rydfloq {

// Fixed-format float text: 17 significant digits, round-trip exact.
std::string format_double(double x);

// Time series with named real columns. Times are strictly increasing.
class ObservableSeries {
public:
    explicit ObservableSeries(std::vector<std::string> names = {});

    void push(double t, const std::vector<double>& row);
    std::size_t size() const { return times_.size(); }
    const std::vector<double>& times() const { return times_; }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& column(const std::string& name) const;
    nlohmann::json& metadata() { return metadata_; }
    const nlohmann::json& metadata() const { return metadata_; }

    void write_csv(std::ostream& os, const std::string& time_label = "t") const;
    nlohmann::json to_json() const;

private:
    std::vector<double> times_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    nlohmann::json metadata_ = nlohmann::json::object();
};

// Minimal CSV table writer: header plus rows of numbers, LF endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(const std::vector<double>& row);
    void add_row(const std::vector<std::string>& row);
    std::size_t rows() const { return rows_.size(); }
    void write(std::ostream& os) const;
    void save(const std::filesystem::path& path) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void save_series_csv(const ObservableSeries& s, const std::filesystem::path& path,
                     const std::string& time_label = "t");

}  // namespace rydfloq
