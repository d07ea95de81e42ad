#pragma once

#include <string>

#include "lossagent/process.hpp"

namespace lossagent {

// Process checkpoints: little-endian binary file with the layout
//
//   offset  size  field
//   0       4     magic "LACK" (0x4c 0x41 0x43 0x4b)
//   4       4     format version, u32 (currently 1)
//   8       8     parameter count, u64
//   16      8     stage_index, i64
//   24      8     iteration_count, i64
//   32      8*N   parameters, f64 array
//
// The rng label of ProcessState is not persisted; it is re-derived from the
// run seed (the toy restorer trains full-batch and never draws from it).
void save_checkpoint(const std::string& path, const ProcessState& state);
ProcessState load_checkpoint(const std::string& path);

}  // namespace lossagent
