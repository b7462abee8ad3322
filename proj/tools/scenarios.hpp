#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "rydfloq/series.hpp"

namespace rydfloq::cli {

// Files of one run directory. Every artifact is written as soon as it is
// complete, so a failed run still leaves its finished pieces behind.
class RunOutput {
public:
    RunOutput(std::filesystem::path dir, const Output& formats);

    const std::filesystem::path& dir() const { return dir_; }
    void table(const std::string& stem, const CsvTable& t);
    void series(const std::string& stem, const ObservableSeries& s, const std::string& time_label = "t");
    void document(const std::string& stem, const nlohmann::json& j);
    const std::vector<std::string>& files() const { return files_; }

    nlohmann::json summary = nlohmann::json::object();

private:
    std::filesystem::path dir_;
    Output formats_;
    std::vector<std::string> files_;
};

void run_scenario(const RunConfig& cfg, RunOutput& out);

}  // namespace rydfloq::cli
