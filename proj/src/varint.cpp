#include "ngram/varint.hpp"

#include <limits>

#include "ngram/error.hpp"

namespace ngram {

namespace {
[[noreturn]] void corrupt() { throw error("corrupt encoding"); }
}  // namespace

std::uint64_t ByteReader::varint() {
    std::uint64_t v = 0;
    for (unsigned shift = 0; shift < 64; shift += 7) {
        if (m_pos >= m_data.size()) corrupt();
        std::uint8_t byte = m_data[m_pos++];
        std::uint64_t payload = byte & 0x7f;
        if (shift == 63 && payload > 1) corrupt();
        v |= payload << shift;
        if (byte & 0x80) return v;
    }
    corrupt();
}

TermSequence ByteReader::sequence() {
    std::uint64_t n = varint();
    // every id takes at least one byte
    if (n > remaining()) corrupt();
    TermSequence s;
    s.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t id = varint();
        if (id > std::numeric_limits<TermId>::max()) corrupt();
        s.push_back(static_cast<TermId>(id));
    }
    return s;
}

ByteView ByteReader::bytes(std::size_t n) {
    if (n > remaining()) corrupt();
    ByteView v = m_data.subspan(m_pos, n);
    m_pos += n;
    return v;
}

void append_sequence(Bytes& out, TermView s) {
    put_varint(out, s.size());
    for (TermId t : s) put_varint(out, t);
}

Bytes encode_sequence(TermView s) {
    Bytes out;
    out.reserve(encoded_sequence_size(s));
    append_sequence(out, s);
    return out;
}

TermSequence decode_sequence(ByteView bytes) {
    ByteReader r(bytes);
    TermSequence s = r.sequence();
    if (!r.done()) corrupt();
    return s;
}

std::uint64_t decode_varint(ByteView bytes) {
    ByteReader r(bytes);
    std::uint64_t v = r.varint();
    if (!r.done()) corrupt();
    return v;
}

}  // namespace ngram
