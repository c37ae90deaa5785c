#pragma once

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "ngram/method.hpp"

namespace ngram {

/// Frequent (k-1)-grams of the previous Apriori-Scan iteration, shared
/// read-only by all map tasks of the next one.
class FrequentSet {
public:
    static constexpr std::size_t default_cap = 10'000'000;

    FrequentSet() = default;
    /// Throws "dictionary too large" when the records exceed `cap` entries.
    static FrequentSet from_records(const std::vector<engine::KeyValue>& records, std::size_t cap = default_cap);

    void insert(TermView s) { m_set.insert(to_sequence(s)); }
    bool contains(TermView s) const;
    std::size_t size() const { return m_set.size(); }
    bool empty() const { return m_set.empty(); }

private:
    std::unordered_set<TermSequence, SequenceHash> m_set;
};

/// Emits each k-gram occurrence whose two constituent (k-1)-grams are in
/// `dict`; every k-gram when k == 1.
void scan_map(std::size_t k, const FrequentSet& dict, const FragmentRecord& fragment, ValueCodec codec,
              engine::Sink& out);

struct AprioriScanOptions : MethodOptions {
    std::size_t dictionary_cap = FrequentSet::default_cap;
};

RunResult run_apriori_scan(const Corpus& corpus, const AprioriScanOptions& options);

// Apriori-Index.

/// Occurrences inside one fragment. A document with several fragments
/// contributes one posting per fragment, since positions are relative to
/// the fragment start.
struct Posting {
    std::uint64_t doc = 0;
    std::uint32_t fragment = 0;
    std::vector<std::uint32_t> positions;  // ascending begin offsets

    bool operator==(const Posting&) const = default;
};

using PostingList = std::vector<Posting>;

std::uint64_t collection_frequency(const PostingList& list);

void encode_posting(Bytes& out, const Posting& p);
Posting decode_posting(ByteReader& in);
Bytes encode_posting_list(const PostingList& list);
PostingList decode_posting_list(ByteView bytes);

/// One (k-gram, posting) pair per distinct k-gram of the fragment.
void index_map(const FragmentRecord& fragment, std::size_t k, engine::Sink& out);

/// Merges the postings of one k-gram, sorted by (doc, fragment). Returns
/// nullopt when the total position count is below tau. Throws
/// "non-unique posting" when two postings share a (doc, fragment).
std::optional<PostingList> index_reduce(std::vector<Posting> postings, std::uint64_t tau);

enum class JoinTag : std::uint8_t {
    r_seq = 0,  // key is a prefix of the carried sequence
    l_seq = 1,  // key is a suffix of the carried sequence
};

struct JoinValue {
    JoinTag tag;
    TermSequence seq;
    PostingList postings;
};

Bytes encode_join_value(JoinTag tag, TermView seq, ByteView encoded_postings);
JoinValue decode_join_value(ByteView bytes);

/// Emits (s without last term, r-seq) and (s without first term, l-seq).
/// Requires |s| >= 2.
void join_map(TermView seq, ByteView encoded_postings, engine::Sink& out);

/// Postings of m followed by the last term of n, where m's suffix equals
/// n's prefix: positions p of m with p+1 a position of n, per fragment.
PostingList join_postings(const PostingList& m, const PostingList& n);

struct JoinedGram {
    TermSequence ngram;
    PostingList postings;
};

/// Joins every (l-seq, r-seq) pair of one key group. Throws
/// "join buffer overflow" when the group holds more than `posting_cap`
/// postings.
std::vector<JoinedGram> join_reduce(const std::vector<JoinValue>& values, std::uint64_t tau,
                                    std::size_t posting_cap);

struct AprioriIndexOptions : MethodOptions {
    std::size_t k = 4;
    std::size_t join_posting_cap = 1'000'000;
};

RunResult run_apriori_index(const Corpus& corpus, const AprioriIndexOptions& options);

}  // namespace ngram
