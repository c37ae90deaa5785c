#pragma once

#include <cstdint>
#include <optional>

#include "ngram/method.hpp"

namespace ngram {

/// Emits every sub-sequence of the fragment with length <= sigma, once per
/// occurrence.
void naive_map(const FragmentRecord& fragment, std::size_t sigma, ValueCodec codec, engine::Sink& out);

/// The count to emit for a group of `occurrences`, if it reaches tau.
inline std::optional<std::uint64_t> naive_reduce(std::uint64_t occurrences, std::uint64_t tau) {
    if (occurrences >= tau) return occurrences;
    return std::nullopt;
}

engine::JobSpec<FragmentRecord> naive_job(const MethodOptions& options);

RunResult run_naive(const Corpus& corpus, const MethodOptions& options);

}  // namespace ngram
