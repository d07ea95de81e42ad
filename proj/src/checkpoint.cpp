#include "lossagent/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "lossagent/errors.hpp"

namespace lossagent {

namespace {

constexpr std::uint32_t kMagic = 0x4b43414c;  // "LACK" in little-endian byte order
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

std::uint64_t get_u64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ProcessState& state) {
    std::string buf;
    buf.reserve(32 + 8 * state.parameters.size());
    put_u32(buf, kMagic);
    put_u32(buf, kVersion);
    put_u64(buf, static_cast<std::uint64_t>(state.parameters.size()));
    put_u64(buf, static_cast<std::uint64_t>(static_cast<std::int64_t>(state.stage_index)));
    put_u64(buf, static_cast<std::uint64_t>(state.iteration_count));
    for (double v : state.parameters) put_f64(buf, v);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open checkpoint file for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("failed writing checkpoint: " + path);
}

ProcessState load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint file: " + path);
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (buf.size() < 32) throw Error("checkpoint truncated: " + path);
    if (get_u32(buf.data()) != kMagic) throw Error("bad checkpoint magic: " + path);
    if (get_u32(buf.data() + 4) != kVersion) {
        throw Error("unsupported checkpoint version in " + path);
    }
    const std::uint64_t count = get_u64(buf.data() + 8);
    if (buf.size() != 32 + 8 * count) throw Error("checkpoint size mismatch: " + path);

    ProcessState state;
    state.stage_index = static_cast<int>(static_cast<std::int64_t>(get_u64(buf.data() + 16)));
    state.iteration_count = static_cast<std::int64_t>(get_u64(buf.data() + 24));
    state.parameters.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        state.parameters[i] = std::bit_cast<double>(get_u64(buf.data() + 32 + 8 * i));
    }
    return state;
}

}  // namespace lossagent
