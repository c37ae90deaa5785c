#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ngram/sequence.hpp"
#include "ngram/varint.hpp"

namespace ngram::engine {

struct KeyValue {
    TermSequence key;
    Bytes value;
};

/// Three-way comparison: negative when the first key is presented first.
using Comparator = std::function<int(TermView, TermView)>;
using Partitioner = std::function<std::size_t(TermView key, std::size_t partitions)>;

class Sink {
public:
    virtual ~Sink() = default;
    virtual void emit(TermView key, ByteView value) = 0;
};

/// Reduce-side callback. One instance is created per reduce partition (or
/// per map task and partition, for combiners); it sees every group of that
/// partition in comparator order, then cleanup() once.
class Reducer {
public:
    virtual ~Reducer() = default;
    virtual void reduce(TermView key, std::span<const ByteView> values, Sink& out) = 0;
    virtual void cleanup(Sink&) {}
};

using ReducerFactory = std::function<std::unique_ptr<Reducer>()>;

struct CounterSet {
    std::string job;
    std::size_t iteration = 0;
    std::uint64_t map_output_records_pre_combiner = 0;
    std::uint64_t map_output_records = 0;
    std::uint64_t map_output_bytes_pre_combiner = 0;
    std::uint64_t map_output_bytes = 0;
    std::uint64_t reduce_output_records = 0;
    double wall_ms = 0;

    CounterSet& operator+=(const CounterSet& other);
};

/// Everything about a job except its input type.
struct JobShape {
    std::string name;
    std::size_t iteration = 0;
    std::size_t reducers = 1;
    Partitioner partition;
    Comparator compare;
    ReducerFactory reducer;
    ReducerFactory combiner;  // optional

    /// Combiner outputs must keep the key of the group they came from.
};

template <typename Input>
struct JobSpec : JobShape {
    std::function<void(const Input&, Sink&)> map;
};

struct EngineOptions {
    std::size_t workers = 1;
    /// Map task granularity. Task boundaries depend only on the input, so
    /// results do not change with the worker count.
    std::size_t inputs_per_task = 1024;
    std::size_t partition_record_cap = 50'000'000;
    /// Upper bound on map output records held in memory at once. Larger
    /// jobs are shuffled in waves of partitions, re-running the map phase
    /// for each wave.
    std::size_t wave_record_budget = 20'000'000;
    bool validate_comparator = true;
};

struct JobResult {
    std::vector<std::vector<KeyValue>> partitions;
    CounterSet counters;
    std::size_t waves = 1;

    std::size_t record_count() const;
    bool empty() const { return record_count() == 0; }
    /// Concatenation of all partitions in partition order.
    std::vector<KeyValue> flatten() const;
};

namespace detail {
using TaskRunner = std::function<void(std::size_t task, Sink& out)>;
JobResult run_job(const JobShape& shape, std::size_t tasks, const TaskRunner& run_task,
                  const EngineOptions& options);
}  // namespace detail

template <typename Input>
JobResult run_job(const JobSpec<Input>& spec, std::span<const Input> input, const EngineOptions& options) {
    std::size_t per_task = options.inputs_per_task == 0 ? 1 : options.inputs_per_task;
    std::size_t tasks = (input.size() + per_task - 1) / per_task;
    return detail::run_job(
        spec, tasks,
        [&](std::size_t task, Sink& out) {
            std::size_t begin = task * per_task;
            std::size_t end = std::min(input.size(), begin + per_task);
            for (std::size_t i = begin; i < end; ++i) spec.map(input[i], out);
        },
        options);
}

/// Runs fn(0..count-1) on up to `workers` threads; rethrows the exception of
/// the lowest failing index.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

// Multi-iteration chains.

using ChainStep = std::function<JobResult()>;
/// Returns the job for iteration k (1-based) given all prior results, or
/// nullopt to stop.
using ChainFactory = std::function<std::optional<ChainStep>(std::size_t k, const std::vector<JobResult>& done)>;
using StopPredicate = std::function<bool(std::size_t k, const JobResult& last)>;

struct ChainResult {
    std::vector<JobResult> iterations;
    CounterSet totals() const;
};

ChainResult run_chain(const ChainFactory& factory, const StopPredicate& stop, std::size_t max_iterations = 1000);

/// Serialized size of a record under the corpus codec.
inline std::uint64_t record_bytes(TermView key, ByteView value) {
    return encoded_sequence_size(key) + value.size();
}

}  // namespace ngram::engine
