#include "aniso/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace aniso {

void ExperimentReport::add_metric(const std::string& key, double value) {
    for (auto& [k, v] : metrics_)
        if (k == key) {
            v = value;
            return;
        }
    metrics_.emplace_back(key, value);
}

bool ExperimentReport::has_metric(const std::string& key) const {
    return std::any_of(metrics_.begin(), metrics_.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

double ExperimentReport::metric(const std::string& key) const {
    for (const auto& [k, v] : metrics_)
        if (k == key) return v;
    throw InvalidInput("report metric not found: " + key);
}

void ExperimentReport::add_verdict(const std::string& name,
                                   const std::string& metric_key, double tolerance,
                                   bool pass, const std::string& note) {
    if (!has_metric(metric_key))
        throw InvalidInput("verdict '" + name + "' references missing metric '" +
                           metric_key + "'");
    verdicts_.push_back(Verdict{name, metric_key, tolerance, pass, note});
}

bool ExperimentReport::all_pass() const {
    return std::all_of(verdicts_.begin(), verdicts_.end(),
                       [](const Verdict& v) { return v.pass; });
}

nlohmann::ordered_json ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = name_;
    j["config"] = config_;
    nlohmann::ordered_json m = nlohmann::ordered_json::object();
    for (const auto& [k, v] : metrics_) m[k] = v;
    j["metrics"] = m;
    nlohmann::ordered_json vs = nlohmann::ordered_json::array();
    for (const Verdict& v : verdicts_) {
        nlohmann::ordered_json jv;
        jv["name"] = v.name;
        jv["metric"] = v.metric;
        jv["tolerance"] = v.tolerance;
        jv["pass"] = v.pass;
        if (!v.note.empty()) jv["note"] = v.note;
        vs.push_back(jv);
    }
    j["verdicts"] = vs;
    nlohmann::ordered_json ss = nlohmann::ordered_json::array();
    for (const Series& s : series_) {
        nlohmann::ordered_json js;
        js["name"] = s.name;
        js["points"] = nlohmann::ordered_json::array();
        for (const auto& [x, y] : s.points) js["points"].push_back({x, y});
        ss.push_back(js);
    }
    j["series"] = ss;
    j["notes"] = notes_;
    return j;
}

void emit_report(const ExperimentReport& report, const std::string& out_dir,
                 bool json_format, bool csv_format) {
    std::filesystem::create_directories(out_dir);
    if (json_format) {
        std::ofstream out(std::filesystem::path(out_dir) / "report.json");
        if (!out) throw Error("emit_report: cannot write report.json in " + out_dir);
        out << report.to_json().dump(2) << "\n";
        if (!out) throw Error("emit_report: write failed");
    }
    if (csv_format) {
        char buf[80];
        for (const Series& s : report.series()) {
            std::string fname = "series_" + s.name + ".csv";
            for (char& c : fname)
                if (c == ' ' || c == '/') c = '_';
            std::ofstream out(std::filesystem::path(out_dir) / fname);
            if (!out) throw Error("emit_report: cannot write " + fname);
            out << "x,y\n";
            for (const auto& [x, y] : s.points) {
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", x, y);
                out << buf;
            }
            if (!out) throw Error("emit_report: write failed");
        }
    }
}

} // namespace aniso
