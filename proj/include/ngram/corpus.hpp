#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ngram/sequence.hpp"
#include "ngram/varint.hpp"

namespace ngram {

using Sentence = std::vector<std::string>;

/// Splits raw text into sentences of lowercased tokens. Tokens are maximal
/// runs of letters/digits; '.', '!', '?' and newlines end a sentence.
std::vector<Sentence> tokenize_and_split(std::string_view text);

/// One tokenized document as produced by tokenize_and_split.
using TokenizedDocument = std::vector<Sentence>;

/// Bidirectional term/id map. Ids are dense and ranked by descending
/// collection frequency, ties broken by ascending surface form.
class Dictionary {
public:
    struct Entry {
        std::string surface;
        std::uint64_t cf = 0;
    };

    Dictionary() = default;

    /// Ranks the given (surface, cf) pairs. Throws on duplicate surfaces.
    static Dictionary from_counts(std::vector<Entry> counts);

    std::size_t size() const { return m_entries.size(); }
    bool empty() const { return m_entries.empty(); }

    const std::string& surface(TermId id) const;
    std::uint64_t cf(TermId id) const;
    std::optional<TermId> lookup(std::string_view surface) const;
    const std::vector<Entry>& entries() const { return m_entries; }

    /// "surface TAB id TAB cf" per line, ordered by id.
    void write(std::ostream& out) const;
    static Dictionary read(std::istream& in);

    std::string render(TermView s) const;

private:
    std::vector<Entry> m_entries;
    std::unordered_map<std::string, TermId> m_ids;
};

Dictionary build_dictionary(std::span<const TokenizedDocument> corpus);

struct Document {
    std::uint64_t id = 0;
    std::uint32_t year = 0;  // 0 = absent
    std::vector<TermSequence> fragments;
};

using Corpus = std::vector<Document>;

/// Maps a tokenized document onto term ids; empty sentences are dropped.
Document encode_document(const TokenizedDocument& doc, const Dictionary& dict,
                         std::uint64_t id, std::uint32_t year = 0);

/// Maximal runs of terms for which `frequent[id]` holds.
std::vector<TermSequence> split_at_infrequent(TermView fragment,
                                              const std::vector<bool>& frequent);

Corpus split_corpus(const Corpus& corpus, const std::vector<bool>& frequent);

std::uint64_t total_occurrences(const Corpus& corpus);

/// A fragment as seen by map tasks; views into a Corpus that must outlive it.
struct FragmentRecord {
    std::uint64_t doc_id = 0;
    std::uint32_t year = 0;
    std::uint32_t fragment = 0;
    TermView terms;
};

std::vector<FragmentRecord> fragment_records(const Corpus& corpus);

// Binary corpus codec: per document varint id, varint year, varint fragment
// count, then each fragment as an encoded sequence.
void append_document(Bytes& out, const Document& doc);
Document read_document(ByteReader& in);
Bytes encode_corpus(std::span<const Document> docs);
Corpus decode_corpus(ByteView bytes);

inline constexpr std::string_view dictionary_file_name = "dictionary.tsv";
inline constexpr std::string_view shard_extension = ".corpus";

void write_corpus_shard(const std::filesystem::path& path, std::span<const Document> docs);
Corpus read_corpus_shard(const std::filesystem::path& path);

/// Reads every *.corpus shard of a directory in lexicographic file order.
Corpus read_corpus_dir(const std::filesystem::path& dir);
Dictionary read_dictionary_file(const std::filesystem::path& path);
void write_dictionary_file(const std::filesystem::path& path, const Dictionary& dict);

Bytes read_file_bytes(const std::filesystem::path& path);

}  // namespace ngram
