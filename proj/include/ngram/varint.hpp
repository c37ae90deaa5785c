#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ngram/sequence.hpp"

namespace ngram {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Variable-byte layout: 7 payload bits per byte, least significant group
// first, high bit set on the terminating byte of each integer.

inline std::size_t varint_size(std::uint64_t v) {
    std::size_t n = 1;
    while (v >= 0x80) {
        v >>= 7;
        ++n;
    }
    return n;
}

inline void put_varint(Bytes& out, std::uint64_t v) {
    while (v >= 0x80) {
        out.push_back(static_cast<std::uint8_t>(v & 0x7f));
        v >>= 7;
    }
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
}

/// Cursor over an encoded buffer. Every read throws ngram::error
/// ("corrupt encoding") on truncated or overlong input.
class ByteReader {
public:
    explicit ByteReader(ByteView data) : m_data(data) {}

    std::uint64_t varint();
    TermSequence sequence();
    ByteView bytes(std::size_t n);

    bool done() const { return m_pos == m_data.size(); }
    std::size_t position() const { return m_pos; }
    std::size_t remaining() const { return m_data.size() - m_pos; }

private:
    ByteView m_data;
    std::size_t m_pos = 0;
};

/// Serialized size of a sequence: varint length prefix plus one varint per id.
inline std::size_t encoded_sequence_size(TermView s) {
    std::size_t n = varint_size(s.size());
    for (TermId t : s) n += varint_size(t);
    return n;
}

void append_sequence(Bytes& out, TermView s);
Bytes encode_sequence(TermView s);

/// Decodes one sequence that must span the whole buffer.
TermSequence decode_sequence(ByteView bytes);

inline Bytes encode_varint(std::uint64_t v) {
    Bytes b;
    put_varint(b, v);
    return b;
}

/// Decodes a buffer holding exactly one varint.
std::uint64_t decode_varint(ByteView bytes);

}  // namespace ngram
