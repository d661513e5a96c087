#pragma once
// Experiment pipelines: staged configs, the run manifest, and report
// rendering. Each CLI subcommand maps onto one stage executor here.

#include <string>
#include <vector>

#include <json.hpp>

#include "types.hpp"

namespace fluxdiag {

struct StageRecord {
    std::string stage;
    double wall_ms = 0.0;
    std::vector<std::string> outputs;  // paths relative to out_dir
};

struct RunManifest {
    std::string tool_version;
    std::string config_sha256;
    std::vector<std::string> grids;                 // descriptor strings
    std::vector<StageRecord> stages;
    std::vector<std::pair<std::string, std::string>> digests;  // file -> sha256

    std::string to_json() const;
};

// Executes one stage; paths in `params` are resolved against out_dir unless
// absolute. Returns the created files (relative form preserved).
std::vector<std::string> run_stage(const std::string& stage,
                                   const nlohmann::ordered_json& params,
                                   const std::string& out_dir);

// Executes config["pipeline"] in order and writes manifest.json in out_dir.
RunManifest run_pipeline(const std::string& config_text,
                         const std::string& out_dir_override = "");

// Summary table for report files plus a gnuplot-ready CSV of
// (log shift_or_eps, log value); csv_path may be empty to skip the CSV.
std::string render_reports(const std::vector<std::string>& report_paths,
                           const std::string& csv_path);

}  // namespace fluxdiag
