#pragma once

#include <stdexcept>
#include <string>

#include "arnca/grid.hpp"

namespace arnca {

/// Distinct failure modes of the chunk container format.
enum class ChunkErrorKind {
    Io,
    BadMagic,
    UnsupportedVersion,
    Truncated,
    CodeOutOfRange,
    BadField, // env/tag byte outside the defined values
};

class ChunkError : public std::runtime_error {
public:
    ChunkError(ChunkErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ChunkErrorKind kind() const { return kind_; }

private:
    ChunkErrorKind kind_;
};

// Binary chunk container, little-endian:
//   magic "ARNC", version u16 = 1, env u8, flags u8 (bit0 stochastic),
//   n u16, T u16, seed u64, params length u32 + UTF-8 JSON,
//   T*n*n state-code bytes (frame-major, row-major),
//   then optional aux sections: tag u8, payload
//     tag 1: heat, f32 * T*n*n
//     tag 2: buy_streak, u8 * T*n*n
void write_chunk(const SequenceChunk& chunk, const std::string& path);
SequenceChunk read_chunk(const std::string& path);

std::string serialize_chunk(const SequenceChunk& chunk);
SequenceChunk deserialize_chunk(const std::string& bytes);

} // namespace arnca
