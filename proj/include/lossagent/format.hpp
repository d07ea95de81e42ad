#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lossagent {

// Fixed-format number rendering. Prompts and CSV exports must be
// byte-reproducible, so all user-facing numbers go through these helpers
// (snprintf with the C locale) rather than through streams.
std::string fmt_fixed(double value, int decimals);

inline std::string fmt4(double value) { return fmt_fixed(value, 4); }
inline std::string fmt6(double value) { return fmt_fixed(value, 6); }

std::string hex64(std::uint64_t value);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace lossagent
