#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lossagent/experts.hpp"
#include "lossagent/process.hpp"
#include "lossagent/weights.hpp"

namespace lossagent {

// Compact record of the agent consultation that produced a stage's weights.
struct DecisionSummary {
    std::string reply_digest;  // fnv1a-64 hex over every attempt reply
    int attempts = 1;
    std::string parse_status;  // "ok" | "fallback"
    bool clipped = false;

    bool operator==(const DecisionSummary& other) const = default;
};

// One stage's record: the weights it trained with, the feedback its outputs
// earned, and (for agent stages) how the weights were decided.
struct TrajectoryEntry {
    int stage_index = 0;
    LossWeights weights_used;
    std::vector<Feedback> feedback;  // one per objective, in objective order
    std::optional<DecisionSummary> decision;
    StageReport stage_report;

    bool operator==(const TrajectoryEntry& other) const;
};

using Trajectory = std::vector<TrajectoryEntry>;

// JSONL persistence: first line {"config_digest", "schema_version"}, then one
// entry object per line, numbers at full round-trip precision. load(persist)
// is field-for-field identity.
void persist_trajectory(const Trajectory& trajectory, const std::string& config_digest,
                        const std::string& path);

struct LoadedTrajectory {
    Trajectory entries;
    std::string config_digest;
    int schema_version = 0;
};

// Throws LoadError (with the offending 1-based line number) on malformed
// lines and IntegrityError on non-contiguous stage indices.
LoadedTrajectory load_trajectory(const std::string& path);

// Incremental writer used by runs so partial trajectories survive aborts.
class TrajectoryWriter {
  public:
    // Empty path: disabled sink that discards entries.
    TrajectoryWriter(std::string path, const std::string& config_digest);

    void append(const TrajectoryEntry& entry);

    const std::string& path() const { return path_; }

  private:
    std::string path_;
};

constexpr int kTrajectorySchemaVersion = 1;

}  // namespace lossagent
