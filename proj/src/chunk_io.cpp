#include "arnca/chunk_io.hpp"

#include <cstring>
#include <fstream>

namespace arnca {

namespace {

constexpr char kMagic[4] = {'A', 'R', 'N', 'C'};
constexpr uint16_t kVersion = 1;
constexpr uint8_t kAuxHeat = 1;
constexpr uint8_t kAuxBuyStreak = 2;

void put_u16(std::string& out, uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    const char* take(size_t count) {
        if (pos_ + count > bytes_.size())
            throw ChunkError(ChunkErrorKind::Truncated,
                             "chunk truncated at byte " + std::to_string(pos_));
        const char* p = bytes_.data() + pos_;
        pos_ += count;
        return p;
    }

    uint8_t u8() { return static_cast<uint8_t>(*take(1)); }

    uint16_t u16() {
        const unsigned char* p = reinterpret_cast<const unsigned char*>(take(2));
        return static_cast<uint16_t>(p[0] | (p[1] << 8));
    }

    uint32_t u32() {
        const unsigned char* p = reinterpret_cast<const unsigned char*>(take(4));
        return p[0] | (p[1] << 8) | (p[2] << 16) | (uint32_t(p[3]) << 24);
    }

    uint64_t u64() {
        uint64_t v = 0;
        const unsigned char* p = reinterpret_cast<const unsigned char*>(take(8));
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
        return v;
    }

    bool at_end() const { return pos_ == bytes_.size(); }

private:
    const std::string& bytes_;
    size_t pos_ = 0;
};

} // namespace

std::string serialize_chunk(const SequenceChunk& chunk) {
    std::string out;
    out.append(kMagic, 4);
    put_u16(out, kVersion);
    out.push_back(static_cast<char>(chunk.env));
    out.push_back(static_cast<char>(chunk.stochastic ? 1 : 0));
    put_u16(out, static_cast<uint16_t>(chunk.n));
    put_u16(out, static_cast<uint16_t>(chunk.T));
    put_u64(out, chunk.seed);
    put_u32(out, static_cast<uint32_t>(chunk.params_json.size()));
    out.append(chunk.params_json);

    const size_t cells = static_cast<size_t>(chunk.n) * chunk.n;
    for (const Grid& frame : chunk.frames)
        out.append(reinterpret_cast<const char*>(frame.states.data()), cells);

    if (chunk.env == Env::Forest) {
        out.push_back(static_cast<char>(kAuxHeat));
        for (const Grid& frame : chunk.frames) {
            static_assert(sizeof(float) == 4);
            out.append(reinterpret_cast<const char*>(frame.heat.data()), cells * 4);
        }
    }
    if (chunk.env == Env::Stock) {
        out.push_back(static_cast<char>(kAuxBuyStreak));
        for (const Grid& frame : chunk.frames)
            out.append(reinterpret_cast<const char*>(frame.buy_streak.data()), cells);
    }
    return out;
}

SequenceChunk deserialize_chunk(const std::string& bytes) {
    Reader r(bytes);
    const char* magic = r.take(4);
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw ChunkError(ChunkErrorKind::BadMagic,
                         "bad magic \"" + std::string(magic, 4) + "\"");
    uint16_t version = r.u16();
    if (version != kVersion)
        throw ChunkError(ChunkErrorKind::UnsupportedVersion,
                         "unsupported chunk version " + std::to_string(version));

    SequenceChunk chunk;
    uint8_t env = r.u8();
    if (env > 2)
        throw ChunkError(ChunkErrorKind::BadField,
                         "unknown env byte " + std::to_string(env));
    chunk.env = static_cast<Env>(env);
    chunk.stochastic = (r.u8() & 1) != 0;
    chunk.n = r.u16();
    chunk.T = r.u16();
    chunk.seed = r.u64();
    uint32_t params_len = r.u32();
    chunk.params_json.assign(r.take(params_len), params_len);

    const size_t cells = static_cast<size_t>(chunk.n) * chunk.n;
    chunk.frames.reserve(chunk.T);
    for (int t = 0; t < chunk.T; ++t) {
        Grid g = Grid::empty(chunk.env, chunk.n);
        const char* p = r.take(cells);
        std::memcpy(g.states.data(), p, cells);
        for (size_t c = 0; c < cells; ++c)
            if (g.states[c] >= kStatesPerEnv)
                throw ChunkError(ChunkErrorKind::CodeOutOfRange,
                                 "state code " + std::to_string(g.states[c]) +
                                     " out of range in frame " + std::to_string(t));
        chunk.frames.push_back(std::move(g));
    }

    while (!r.at_end()) {
        uint8_t tag = r.u8();
        if (tag == kAuxHeat) {
            for (Grid& frame : chunk.frames) {
                const char* p = r.take(cells * 4);
                frame.heat.resize(cells);
                std::memcpy(frame.heat.data(), p, cells * 4);
            }
        } else if (tag == kAuxBuyStreak) {
            for (Grid& frame : chunk.frames) {
                const char* p = r.take(cells);
                frame.buy_streak.resize(cells);
                std::memcpy(frame.buy_streak.data(), p, cells);
            }
        } else {
            throw ChunkError(ChunkErrorKind::BadField,
                             "unknown aux section tag " + std::to_string(tag));
        }
    }
    return chunk;
}

void write_chunk(const SequenceChunk& chunk, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ChunkError(ChunkErrorKind::Io, "cannot open " + path + " for writing");
    std::string bytes = serialize_chunk(chunk);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw ChunkError(ChunkErrorKind::Io, "short write to " + path);
}

SequenceChunk read_chunk(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ChunkError(ChunkErrorKind::Io, "cannot open " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    return deserialize_chunk(bytes);
}

} // namespace arnca
