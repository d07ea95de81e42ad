#include "lossagent/trajectory.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "lossagent/errors.hpp"

namespace lossagent {

namespace {

using nlohmann::json;

json feedback_to_json(const Feedback& fb) {
    json j;
    j["objective"] = fb.objective_name;
    j["kind"] = feedback_kind_to_string(fb.kind);
    j["stage_index"] = fb.stage_index;
    if (fb.kind == FeedbackKind::score) {
        j["per_image"] = fb.per_image_scores;
        j["aggregate"] = fb.aggregate_score;
    } else {
        j["per_image"] = fb.per_image_texts;
        j["aggregate"] = fb.aggregate_text;
    }
    return j;
}

Feedback feedback_from_json(const json& j) {
    Feedback fb;
    fb.objective_name = j.at("objective").get<std::string>();
    fb.kind = feedback_kind_from_string(j.at("kind").get<std::string>());
    fb.stage_index = j.at("stage_index").get<int>();
    if (fb.kind == FeedbackKind::score) {
        fb.per_image_scores = j.at("per_image").get<std::vector<double>>();
        fb.aggregate_score = j.at("aggregate").get<double>();
    } else {
        fb.per_image_texts = j.at("per_image").get<std::vector<std::string>>();
        fb.aggregate_text = j.at("aggregate").get<std::string>();
    }
    return fb;
}

json entry_to_json(const TrajectoryEntry& e) {
    json j;
    j["stage_index"] = e.stage_index;
    j["weights_used"] = e.weights_used.values;
    j["feedback"] = json::array();
    for (const Feedback& fb : e.feedback) j["feedback"].push_back(feedback_to_json(fb));
    if (e.decision) {
        j["decision"] = {{"reply_digest", e.decision->reply_digest},
                         {"attempts", e.decision->attempts},
                         {"parse_status", e.decision->parse_status},
                         {"clipped", e.decision->clipped}};
    } else {
        j["decision"] = nullptr;
    }
    j["stage_report"] = {{"mean_composed_loss", e.stage_report.mean_composed_loss},
                         {"mean_per_term_loss", e.stage_report.mean_per_term_loss.values},
                         {"steps_taken", e.stage_report.steps_taken}};
    return j;
}

TrajectoryEntry entry_from_json(const json& j) {
    TrajectoryEntry e;
    e.stage_index = j.at("stage_index").get<int>();
    e.weights_used.values = j.at("weights_used").get<std::vector<double>>();
    for (const json& fj : j.at("feedback")) e.feedback.push_back(feedback_from_json(fj));
    const json& d = j.at("decision");
    if (!d.is_null()) {
        DecisionSummary ds;
        ds.reply_digest = d.at("reply_digest").get<std::string>();
        ds.attempts = d.at("attempts").get<int>();
        ds.parse_status = d.at("parse_status").get<std::string>();
        ds.clipped = d.at("clipped").get<bool>();
        e.decision = ds;
    }
    const json& r = j.at("stage_report");
    e.stage_report.mean_composed_loss = r.at("mean_composed_loss").get<double>();
    e.stage_report.mean_per_term_loss.values =
        r.at("mean_per_term_loss").get<std::vector<double>>();
    e.stage_report.steps_taken = r.at("steps_taken").get<int>();
    return e;
}

std::string header_line(const std::string& config_digest) {
    json h;
    h["schema_version"] = kTrajectorySchemaVersion;
    h["config_digest"] = config_digest;
    return h.dump();
}

}  // namespace

bool TrajectoryEntry::operator==(const TrajectoryEntry& other) const {
    return stage_index == other.stage_index && weights_used == other.weights_used &&
           feedback == other.feedback && decision == other.decision &&
           stage_report.mean_composed_loss == other.stage_report.mean_composed_loss &&
           stage_report.mean_per_term_loss == other.stage_report.mean_per_term_loss &&
           stage_report.steps_taken == other.stage_report.steps_taken;
}

void persist_trajectory(const Trajectory& trajectory, const std::string& config_digest,
                        const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open trajectory file for writing: " + path);
    out << header_line(config_digest) << '\n';
    for (const TrajectoryEntry& e : trajectory) out << entry_to_json(e).dump() << '\n';
    if (!out) throw Error("failed writing trajectory: " + path);
}

LoadedTrajectory load_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trajectory file: " + path);

    LoadedTrajectory out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            throw LoadError(line_no, "trajectory line " + std::to_string(line_no) + " is empty");
        }
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw LoadError(line_no, "trajectory line " + std::to_string(line_no) +
                                         " is not valid JSON: " + e.what());
        }
        try {
            if (line_no == 1) {
                out.schema_version = j.at("schema_version").get<int>();
                out.config_digest = j.at("config_digest").get<std::string>();
                if (out.schema_version != kTrajectorySchemaVersion) {
                    throw LoadError(line_no, "unsupported trajectory schema version " +
                                                 std::to_string(out.schema_version));
                }
            } else {
                out.entries.push_back(entry_from_json(j));
            }
        } catch (const json::exception& e) {
            throw LoadError(line_no, "trajectory line " + std::to_string(line_no) +
                                         " has unexpected structure: " + e.what());
        }
    }
    if (line_no == 0) throw LoadError(1, "trajectory file has no header line");

    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        if (out.entries[i].stage_index != static_cast<int>(i)) {
            throw IntegrityError("trajectory stage indices are not contiguous at entry " +
                                 std::to_string(i));
        }
    }
    return out;
}

TrajectoryWriter::TrajectoryWriter(std::string path, const std::string& config_digest)
    : path_(std::move(path)) {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::trunc);
    if (!out) throw Error("cannot open trajectory file for writing: " + path_);
    out << header_line(config_digest) << '\n';
    if (!out) throw Error("failed writing trajectory header: " + path_);
}

void TrajectoryWriter::append(const TrajectoryEntry& entry) {
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw Error("cannot append to trajectory file: " + path_);
    out << entry_to_json(entry).dump() << '\n';
    out.flush();
    if (!out) throw Error("failed appending trajectory entry: " + path_);
}

}  // namespace lossagent
