#include "ngram/corpus.hpp"

#include <algorithm>
#include <clocale>
#include <fstream>
#include <istream>
#include <locale.h>
#include <map>
#include <ostream>
#include <sstream>
#include <wctype.h>

#include "ngram/error.hpp"

namespace ngram {

namespace {

// Character classes come from glibc's C.UTF-8 tables when present. Without
// them every non-ASCII code point counts as a letter and is kept verbatim.
class CharClassifier {
public:
    CharClassifier() : m_locale(newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0))) {}
    ~CharClassifier() {
        if (m_locale) freelocale(m_locale);
    }
    CharClassifier(const CharClassifier&) = delete;
    CharClassifier& operator=(const CharClassifier&) = delete;

    bool is_token_char(char32_t c) const {
        if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        if (m_locale) return iswalnum_l(static_cast<wint_t>(c), m_locale) != 0;
        return true;
    }

    char32_t lower(char32_t c) const {
        if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
        if (m_locale) return static_cast<char32_t>(towlower_l(static_cast<wint_t>(c), m_locale));
        return c;
    }

private:
    locale_t m_locale;
};

const CharClassifier& classifier() {
    static const CharClassifier instance;
    return instance;
}

constexpr char32_t invalid_code_point = 0xFFFD;

// Decodes one UTF-8 code point starting at text[i]; malformed input yields
// U+FFFD and advances by one byte.
char32_t next_code_point(std::string_view text, std::size_t& i) {
    auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return invalid_code_point;
    }
    if (i + len > text.size()) {
        ++i;
        return invalid_code_point;
    }
    for (std::size_t k = 1; k < len; ++k) {
        unsigned char b = byte(i + k);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return invalid_code_point;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool ends_sentence(char32_t c) { return c == '.' || c == '!' || c == '?' || c == '\n'; }

}  // namespace

std::vector<Sentence> tokenize_and_split(std::string_view text) {
    const CharClassifier& cls = classifier();
    std::vector<Sentence> sentences;
    Sentence current;
    std::string token;

    auto flush_token = [&] {
        if (!token.empty()) {
            current.push_back(std::move(token));
            token.clear();
        }
    };
    auto flush_sentence = [&] {
        flush_token();
        if (!current.empty()) {
            sentences.push_back(std::move(current));
            current.clear();
        }
    };

    std::size_t i = 0;
    while (i < text.size()) {
        char32_t c = next_code_point(text, i);
        if (cls.is_token_char(c)) {
            append_utf8(token, cls.lower(c));
        } else if (ends_sentence(c)) {
            flush_sentence();
        } else {
            flush_token();
        }
    }
    flush_sentence();
    return sentences;
}

Dictionary Dictionary::from_counts(std::vector<Entry> counts) {
    std::sort(counts.begin(), counts.end(), [](const Entry& a, const Entry& b) {
        if (a.cf != b.cf) return a.cf > b.cf;
        return a.surface < b.surface;
    });
    Dictionary d;
    d.m_ids.reserve(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (!d.m_ids.emplace(counts[i].surface, static_cast<TermId>(i)).second)
            throw error("duplicate dictionary term: " + counts[i].surface);
    }
    d.m_entries = std::move(counts);
    return d;
}

const std::string& Dictionary::surface(TermId id) const {
    if (id >= m_entries.size()) throw error("unknown term id " + std::to_string(id));
    return m_entries[id].surface;
}

std::uint64_t Dictionary::cf(TermId id) const {
    if (id >= m_entries.size()) throw error("unknown term id " + std::to_string(id));
    return m_entries[id].cf;
}

std::optional<TermId> Dictionary::lookup(std::string_view surface) const {
    auto it = m_ids.find(std::string(surface));
    if (it == m_ids.end()) return std::nullopt;
    return it->second;
}

void Dictionary::write(std::ostream& out) const {
    for (std::size_t i = 0; i < m_entries.size(); ++i)
        out << m_entries[i].surface << '\t' << i << '\t' << m_entries[i].cf << '\n';
}

Dictionary Dictionary::read(std::istream& in) {
    std::vector<Entry> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw error("malformed dictionary line " + std::to_string(line_no));
        try {
            std::size_t id = std::stoull(line.substr(t1 + 1, t2 - t1 - 1));
            std::uint64_t cf = std::stoull(line.substr(t2 + 1));
            if (id != entries.size())
                throw error("dictionary ids must be dense and sorted (line " + std::to_string(line_no) + ")");
            entries.push_back({line.substr(0, t1), cf});
        } catch (const std::logic_error&) {
            throw error("malformed dictionary line " + std::to_string(line_no));
        }
    }
    Dictionary d;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i > 0 && entries[i].cf > entries[i - 1].cf)
            throw error("dictionary frequencies must be non-increasing in id order");
        if (!d.m_ids.emplace(entries[i].surface, static_cast<TermId>(i)).second)
            throw error("duplicate dictionary term: " + entries[i].surface);
    }
    d.m_entries = std::move(entries);
    return d;
}

std::string Dictionary::render(TermView s) const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out.push_back(' ');
        out += surface(s[i]);
    }
    return out;
}

Dictionary build_dictionary(std::span<const TokenizedDocument> corpus) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& doc : corpus)
        for (const auto& sentence : doc)
            for (const auto& token : sentence) ++counts[token];
    if (counts.empty()) throw error("empty corpus");
    std::vector<Dictionary::Entry> entries;
    entries.reserve(counts.size());
    for (auto& [surface, cf] : counts) entries.push_back({surface, cf});
    return Dictionary::from_counts(std::move(entries));
}

Document encode_document(const TokenizedDocument& doc, const Dictionary& dict, std::uint64_t id,
                         std::uint32_t year) {
    Document out{id, year, {}};
    out.fragments.reserve(doc.size());
    for (const auto& sentence : doc) {
        if (sentence.empty()) continue;
        TermSequence seq;
        seq.reserve(sentence.size());
        for (const auto& token : sentence) {
            auto tid = dict.lookup(token);
            if (!tid) throw error("token not in dictionary: " + token);
            seq.push_back(*tid);
        }
        out.fragments.push_back(std::move(seq));
    }
    return out;
}

std::vector<TermSequence> split_at_infrequent(TermView fragment, const std::vector<bool>& frequent) {
    std::vector<TermSequence> runs;
    TermSequence current;
    for (TermId t : fragment) {
        if (t < frequent.size() && frequent[t]) {
            current.push_back(t);
        } else if (!current.empty()) {
            runs.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) runs.push_back(std::move(current));
    return runs;
}

Corpus split_corpus(const Corpus& corpus, const std::vector<bool>& frequent) {
    Corpus out;
    out.reserve(corpus.size());
    for (const auto& doc : corpus) {
        Document d{doc.id, doc.year, {}};
        for (const auto& frag : doc.fragments) {
            auto runs = split_at_infrequent(frag, frequent);
            for (auto& r : runs) d.fragments.push_back(std::move(r));
        }
        out.push_back(std::move(d));
    }
    return out;
}

std::uint64_t total_occurrences(const Corpus& corpus) {
    std::uint64_t n = 0;
    for (const auto& doc : corpus)
        for (const auto& f : doc.fragments) n += f.size();
    return n;
}

std::vector<FragmentRecord> fragment_records(const Corpus& corpus) {
    std::vector<FragmentRecord> out;
    for (const auto& doc : corpus)
        for (std::size_t i = 0; i < doc.fragments.size(); ++i)
            out.push_back({doc.id, doc.year, static_cast<std::uint32_t>(i), doc.fragments[i]});
    return out;
}

void append_document(Bytes& out, const Document& doc) {
    put_varint(out, doc.id);
    put_varint(out, doc.year);
    put_varint(out, doc.fragments.size());
    for (const auto& f : doc.fragments) append_sequence(out, f);
}

Document read_document(ByteReader& in) {
    Document d;
    d.id = in.varint();
    std::uint64_t year = in.varint();
    if (year > UINT32_MAX) throw error("corrupt encoding");
    d.year = static_cast<std::uint32_t>(year);
    std::uint64_t n = in.varint();
    if (n > in.remaining()) throw error("corrupt encoding");
    d.fragments.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) d.fragments.push_back(in.sequence());
    return d;
}

Bytes encode_corpus(std::span<const Document> docs) {
    Bytes out;
    for (const auto& d : docs) append_document(out, d);
    return out;
}

Corpus decode_corpus(ByteView bytes) {
    ByteReader r(bytes);
    Corpus c;
    while (!r.done()) c.push_back(read_document(r));
    return c;
}

Bytes read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path.string());
    Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

void write_corpus_shard(const std::filesystem::path& path, std::span<const Document> docs) {
    Bytes data = encode_corpus(docs);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw error("cannot write " + path.string());
}

Corpus read_corpus_shard(const std::filesystem::path& path) { return decode_corpus(read_file_bytes(path)); }

Corpus read_corpus_dir(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw error("not a corpus directory: " + dir.string());
    std::vector<std::filesystem::path> shards;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == shard_extension)
            shards.push_back(entry.path());
    std::sort(shards.begin(), shards.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    if (shards.empty()) throw error("no corpus shards in " + dir.string());
    Corpus corpus;
    for (const auto& p : shards) {
        Corpus part = read_corpus_shard(p);
        for (auto& d : part) corpus.push_back(std::move(d));
    }
    return corpus;
}

Dictionary read_dictionary_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path.string());
    return Dictionary::read(in);
}

void write_dictionary_file(const std::filesystem::path& path, const Dictionary& dict) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw error("cannot write " + path.string());
    dict.write(out);
}

}  // namespace ngram
