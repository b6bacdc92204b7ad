#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace dtpt::app {

inline constexpr std::string_view tool_version = "dtpt 1.0.0";

struct FileRecord {
    std::string path;  ///< relative to the manifest directory
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

/// Everything needed to audit or repeat a run.  Timings and the worker count
/// vary between runs; file hashes must not.
struct RunManifest {
    std::string command;
    std::vector<std::string> configs;  ///< resolved config text per run
    std::vector<std::string> assumptions;
    std::vector<std::string> warnings;
    std::vector<FileRecord> files;
    std::vector<StageTiming> timings;
    long long clamp_events = 0;
    unsigned threads = 1;
    double wall_seconds = 0.0;

    void write_json(std::ostream& os) const;
};

std::string sha256_file(const std::filesystem::path& path);

/// Writes files below `root` and records their hashes in the manifest.
class OutputSink {
public:
    OutputSink(std::filesystem::path root, RunManifest& manifest);

    const std::filesystem::path& root() const { return m_root; }
    RunManifest& manifest() { return m_manifest; }

    void write(const std::filesystem::path& relative, const std::function<void(std::ostream&)>& body);

private:
    std::filesystem::path m_root;
    RunManifest& m_manifest;
};

/// Adds the elapsed time of its scope to the manifest.
class StageTimer {
public:
    StageTimer(RunManifest& m, std::string stage)
        : m_manifest(m), m_stage(std::move(stage)), m_start(std::chrono::steady_clock::now()) {}
    ~StageTimer() {
        m_manifest.timings.push_back(
            {m_stage, std::chrono::duration<double>(std::chrono::steady_clock::now() - m_start).count()});
    }
    StageTimer(const StageTimer&) = delete;
    StageTimer& operator=(const StageTimer&) = delete;

private:
    RunManifest& m_manifest;
    std::string m_stage;
    std::chrono::steady_clock::time_point m_start;
};

}  // namespace dtpt::app
