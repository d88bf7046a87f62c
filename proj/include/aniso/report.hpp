#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "aniso/errors.hpp"

namespace aniso {

/// Pass/fail statement tied to a named metric and the tolerance used.
struct Verdict {
    std::string name;
    std::string metric; // must name a metric present in the report
    double tolerance = 0.0;
    bool pass = false;
    std::string note;
};

/// Named (x, y) series for slope fits and profiles.
struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

/// Experiment output: scalar metrics, series, verdicts, provenance notes.
/// Insertion order is preserved so emitted JSON is byte-stable.
class ExperimentReport {
  public:
    explicit ExperimentReport(std::string name) : name_(std::move(name)) {}

    const std::string& name() const { return name_; }

    void set_config(nlohmann::ordered_json config) { config_ = std::move(config); }
    const nlohmann::ordered_json& config() const { return config_; }

    void add_metric(const std::string& key, double value);
    bool has_metric(const std::string& key) const;
    double metric(const std::string& key) const;
    const std::vector<std::pair<std::string, double>>& metrics() const {
        return metrics_;
    }

    void add_series(Series s) { series_.push_back(std::move(s)); }
    const std::vector<Series>& series() const { return series_; }

    /// The metric must already exist; enforces the report invariant.
    void add_verdict(const std::string& name, const std::string& metric_key,
                     double tolerance, bool pass, const std::string& note = "");
    const std::vector<Verdict>& verdicts() const { return verdicts_; }

    void add_note(std::string note) { notes_.push_back(std::move(note)); }
    const std::vector<std::string>& notes() const { return notes_; }

    bool all_pass() const;

    nlohmann::ordered_json to_json() const;

  private:
    std::string name_;
    nlohmann::ordered_json config_ = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, double>> metrics_;
    std::vector<Series> series_;
    std::vector<Verdict> verdicts_;
    std::vector<std::string> notes_;
};

/// Writes report.json (always) and series_<name>.csv per series (when any).
/// Deterministic byte-for-byte for equal reports.
void emit_report(const ExperimentReport& report, const std::string& out_dir,
                 bool json_format = true, bool csv_format = true);

} // namespace aniso
