#include "ngram/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

#include "ngram/error.hpp"

namespace ngram::engine {

CounterSet& CounterSet::operator+=(const CounterSet& other) {
    map_output_records_pre_combiner += other.map_output_records_pre_combiner;
    map_output_records += other.map_output_records;
    map_output_bytes_pre_combiner += other.map_output_bytes_pre_combiner;
    map_output_bytes += other.map_output_bytes;
    reduce_output_records += other.reduce_output_records;
    wall_ms += other.wall_ms;
    return *this;
}

std::size_t JobResult::record_count() const {
    std::size_t n = 0;
    for (const auto& p : partitions) n += p.size();
    return n;
}

std::vector<KeyValue> JobResult::flatten() const {
    std::vector<KeyValue> out;
    out.reserve(record_count());
    for (const auto& p : partitions) out.insert(out.end(), p.begin(), p.end());
    return out;
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    workers = std::max<std::size_t>(1, std::min(workers, count));
    std::vector<std::exception_ptr> errors(count);
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::atomic<bool> failed{false};
        auto body = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                    failed.store(true);
                }
            }
        };
        std::vector<std::thread> threads;
        threads.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(body);
        body();
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

namespace {

using Clock = std::chrono::steady_clock;

// Flat record storage: all keys share one term arena, all values one byte
// arena, so a partition costs a few allocations regardless of record count.
class RecordBuffer {
public:
    struct Entry {
        std::uint64_t key_off;
        std::uint64_t val_off;
        std::uint32_t key_len;
        std::uint32_t val_len;
    };

    void add(TermView key, ByteView value) {
        Entry e{m_terms.size(), m_values.size(), static_cast<std::uint32_t>(key.size()),
                static_cast<std::uint32_t>(value.size())};
        m_terms.insert(m_terms.end(), key.begin(), key.end());
        m_values.insert(m_values.end(), value.begin(), value.end());
        m_entries.push_back(e);
    }

    void append(RecordBuffer&& other) {
        if (m_entries.empty()) {
            *this = std::move(other);
            return;
        }
        std::uint64_t toff = m_terms.size();
        std::uint64_t voff = m_values.size();
        m_terms.insert(m_terms.end(), other.m_terms.begin(), other.m_terms.end());
        m_values.insert(m_values.end(), other.m_values.begin(), other.m_values.end());
        m_entries.reserve(m_entries.size() + other.m_entries.size());
        for (Entry e : other.m_entries) {
            e.key_off += toff;
            e.val_off += voff;
            m_entries.push_back(e);
        }
        other.release();
    }

    TermView key(const Entry& e) const { return TermView(m_terms.data() + e.key_off, e.key_len); }
    ByteView value(const Entry& e) const { return ByteView(m_values.data() + e.val_off, e.val_len); }

    std::vector<Entry>& entries() { return m_entries; }
    const std::vector<Entry>& entries() const { return m_entries; }
    std::size_t size() const { return m_entries.size(); }
    bool empty() const { return m_entries.empty(); }

    void release() {
        std::vector<TermId>().swap(m_terms);
        Bytes().swap(m_values);
        std::vector<Entry>().swap(m_entries);
    }

private:
    std::vector<TermId> m_terms;
    Bytes m_values;
    std::vector<Entry> m_entries;
};

int sign(int v) { return (v > 0) - (v < 0); }

// Sorts by the job comparator; ties keep arena order, which is emission order.
void sort_buffer(RecordBuffer& buf, const Comparator& compare) {
    auto& entries = buf.entries();
    std::sort(entries.begin(), entries.end(), [&](const RecordBuffer::Entry& a, const RecordBuffer::Entry& b) {
        int c = compare(buf.key(a), buf.key(b));
        if (c != 0) return c < 0;
        if (a.key_off != b.key_off) return a.key_off < b.key_off;
        return a.val_off < b.val_off;
    });
}

[[noreturn]] void invalid_comparator() { throw error("invalid comparator"); }

// Reflexivity, antisymmetry and transitivity on a deterministic sample.
void check_comparator_sample(const RecordBuffer& buf, const Comparator& compare) {
    constexpr std::size_t samples = 8;
    const auto& entries = buf.entries();
    if (entries.empty()) return;
    std::vector<TermView> keys;
    std::size_t step = std::max<std::size_t>(1, entries.size() / samples);
    for (std::size_t i = 0; i < entries.size() && keys.size() < samples; i += step)
        keys.push_back(buf.key(entries[i]));
    keys.push_back(buf.key(entries.back()));
    for (auto a : keys) {
        if (compare(a, a) != 0) invalid_comparator();
        for (auto b : keys) {
            int ab = sign(compare(a, b));
            if (ab != -sign(compare(b, a))) invalid_comparator();
            for (auto c : keys) {
                if (ab <= 0 && sign(compare(b, c)) <= 0 && sign(compare(a, c)) > 0) invalid_comparator();
            }
        }
    }
}

// Walks a sorted buffer group by group. Adjacent keys must be ordered and
// antisymmetric, which also catches most comparators that are not total
// orders.
template <typename Fn>
void for_each_group(const RecordBuffer& buf, const Comparator& compare, bool validate, Fn&& fn) {
    const auto& entries = buf.entries();
    std::vector<ByteView> values;
    std::size_t i = 0;
    while (i < entries.size()) {
        TermView key = buf.key(entries[i]);
        values.clear();
        values.push_back(buf.value(entries[i]));
        std::size_t j = i + 1;
        for (; j < entries.size(); ++j) {
            TermView next = buf.key(entries[j]);
            int c = compare(key, next);
            if (validate && (c > 0 || sign(compare(next, key)) != -sign(c))) invalid_comparator();
            if (c != 0) break;
            values.push_back(buf.value(entries[j]));
        }
        fn(key, std::span<const ByteView>(values));
        i = j;
    }
}

class BufferSink : public Sink {
public:
    explicit BufferSink(RecordBuffer& out) : m_out(out) {}
    void emit(TermView key, ByteView value) override {
        m_out.add(key, value);
        ++records;
        bytes += record_bytes(key, value);
    }
    std::uint64_t records = 0;
    std::uint64_t bytes = 0;

private:
    RecordBuffer& m_out;
};

class OutputSink : public Sink {
public:
    explicit OutputSink(std::vector<KeyValue>& out) : m_out(out) {}
    void emit(TermView key, ByteView value) override {
        m_out.push_back(KeyValue{to_sequence(key), Bytes(value.begin(), value.end())});
    }

private:
    std::vector<KeyValue>& m_out;
};

struct TaskOutput {
    std::vector<RecordBuffer> buffers;  // per partition
    std::vector<std::uint64_t> pre_records;  // per partition
    std::uint64_t pre_bytes = 0;
    std::uint64_t post_records = 0;
    std::uint64_t post_bytes = 0;
    bool stored = false;
};

// Routes map output to per-partition buffers. In counting mode records are
// only tallied; `wave` restricts storage to a subset of partitions.
class MapSink : public Sink {
public:
    MapSink(const JobShape& shape, TaskOutput& out, bool count, bool store, const std::vector<bool>* wave)
        : m_shape(shape), m_out(out), m_count(count), m_store(store), m_wave(wave) {}

    void emit(TermView key, ByteView value) override {
        std::size_t p = m_shape.partition(key, m_shape.reducers);
        if (p >= m_shape.reducers)
            throw error("partition out of range: " + std::to_string(p) + " >= " + std::to_string(m_shape.reducers));
        if (m_count) {
            ++m_out.pre_records[p];
            m_out.pre_bytes += record_bytes(key, value);
        }
        if (m_store && (!m_wave || (*m_wave)[p])) {
            m_out.buffers[p].add(key, value);
            ++stored;
        }
    }

    void stop_storing() {
        m_store = false;
        for (auto& b : m_out.buffers) b.release();
    }

    bool storing() const { return m_store; }
    std::uint64_t stored = 0;

private:
    const JobShape& m_shape;
    TaskOutput& m_out;
    bool m_count;
    bool m_store;
    const std::vector<bool>* m_wave;
};

// Replaces every buffer of a task with its combined form and fills the
// post-combiner counters.
void combine_task(const JobShape& shape, TaskOutput& task, bool validate) {
    for (auto& buf : task.buffers) {
        if (buf.empty()) continue;
        if (!shape.combiner) {
            task.post_records += buf.size();
            for (const auto& e : buf.entries()) task.post_bytes += record_bytes(buf.key(e), buf.value(e));
            continue;
        }
        if (validate) check_comparator_sample(buf, shape.compare);
        sort_buffer(buf, shape.compare);
        RecordBuffer combined;
        BufferSink sink(combined);
        auto combiner = shape.combiner();
        for_each_group(buf, shape.compare, validate,
                       [&](TermView key, std::span<const ByteView> values) { combiner->reduce(key, values, sink); });
        combiner->cleanup(sink);
        task.post_records += sink.records;
        task.post_bytes += sink.bytes;
        buf = std::move(combined);
    }
}

void run_reduce(const JobShape& shape, RecordBuffer& buf, std::vector<KeyValue>& out, bool validate) {
    if (validate) check_comparator_sample(buf, shape.compare);
    sort_buffer(buf, shape.compare);
    auto reducer = shape.reducer();
    OutputSink sink(out);
    for_each_group(buf, shape.compare, validate,
                   [&](TermView key, std::span<const ByteView> values) { reducer->reduce(key, values, sink); });
    reducer->cleanup(sink);
}

}  // namespace

namespace detail {

namespace {
JobResult run_job_unchecked(const JobShape& shape, std::size_t tasks, const TaskRunner& run_task,
                            const EngineOptions& options);
}  // namespace

JobResult run_job(const JobShape& shape, std::size_t tasks, const TaskRunner& run_task, const EngineOptions& options) {
    try {
        return run_job_unchecked(shape, tasks, run_task, options);
    } catch (const job_error&) {
        throw;
    } catch (const error& e) {
        throw job_error(e.what(), shape.name, shape.iteration);
    }
}

namespace {

JobResult run_job_unchecked(const JobShape& shape, std::size_t tasks, const TaskRunner& run_task,
                            const EngineOptions& options) {
    if (shape.reducers == 0) throw error("job needs at least one reduce partition");
    if (!shape.partition || !shape.compare || !shape.reducer) throw error("incomplete job spec: " + shape.name);
    auto start = Clock::now();
    const std::size_t R = shape.reducers;
    const bool validate = options.validate_comparator;

    std::vector<TaskOutput> outputs(tasks);
    std::atomic<std::uint64_t> held{0};
    std::atomic<bool> over_budget{false};

    // Pass A: count everything, store while the budget allows.
    parallel_for(tasks, options.workers, [&](std::size_t t) {
        TaskOutput& out = outputs[t];
        out.buffers.resize(R);
        out.pre_records.assign(R, 0);
        MapSink sink(shape, out, true, !over_budget.load(), nullptr);
        run_task(t, sink);
        if (!sink.storing()) return;
        combine_task(shape, out, validate);
        std::uint64_t now = held.fetch_add(out.post_records) + out.post_records;
        if (now > options.wave_record_budget) {
            over_budget.store(true);
            for (auto& b : out.buffers) b.release();
            return;
        }
        out.stored = true;
    });

    JobResult result;
    result.partitions.resize(R);
    CounterSet& c = result.counters;
    c.job = shape.name;
    c.iteration = shape.iteration;
    std::vector<std::uint64_t> partition_records(R, 0);
    for (const auto& out : outputs) {
        c.map_output_bytes_pre_combiner += out.pre_bytes;
        for (std::size_t p = 0; p < R; ++p) {
            c.map_output_records_pre_combiner += out.pre_records[p];
            partition_records[p] += out.pre_records[p];
        }
    }

    auto shuffle_and_reduce = [&](const std::vector<std::size_t>& wave_partitions) {
        for (const auto& out : outputs) {
            c.map_output_records += out.post_records;
            c.map_output_bytes += out.post_bytes;
        }
        parallel_for(wave_partitions.size(), options.workers, [&](std::size_t i) {
            std::size_t p = wave_partitions[i];
            RecordBuffer merged;
            for (auto& out : outputs) merged.append(std::move(out.buffers[p]));
            if (merged.size() > options.partition_record_cap)
                throw error("partition record cap exceeded in job " + shape.name + ": " +
                            std::to_string(merged.size()) + " > " + std::to_string(options.partition_record_cap));
            run_reduce(shape, merged, result.partitions[p], validate);
        });
    };

    if (!over_budget.load()) {
        std::vector<std::size_t> all(R);
        for (std::size_t p = 0; p < R; ++p) all[p] = p;
        shuffle_and_reduce(all);
    } else {
        for (auto& out : outputs) out.buffers.clear();
        // Greedy grouping of consecutive partitions by pre-combiner volume.
        std::vector<std::vector<std::size_t>> waves;
        std::uint64_t acc = 0;
        for (std::size_t p = 0; p < R; ++p) {
            if (waves.empty() || (acc + partition_records[p] > options.wave_record_budget && acc > 0)) {
                waves.emplace_back();
                acc = 0;
            }
            waves.back().push_back(p);
            acc += partition_records[p];
        }
        result.waves = waves.size();
        for (const auto& wave : waves) {
            std::vector<bool> member(R, false);
            for (std::size_t p : wave) member[p] = true;
            parallel_for(tasks, options.workers, [&](std::size_t t) {
                TaskOutput& out = outputs[t];
                out.buffers.assign(R, RecordBuffer{});
                out.post_records = 0;
                out.post_bytes = 0;
                MapSink sink(shape, out, false, true, &member);
                run_task(t, sink);
                combine_task(shape, out, validate);
            });
            shuffle_and_reduce(wave);
            for (auto& out : outputs) out.buffers.clear();
        }
    }

    c.reduce_output_records = result.record_count();
    c.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return result;
}

}  // namespace
}  // namespace detail

CounterSet ChainResult::totals() const {
    CounterSet total;
    total.job = iterations.empty() ? std::string() : iterations.front().counters.job;
    for (const auto& it : iterations) total += it.counters;
    total.iteration = iterations.size();
    return total;
}

ChainResult run_chain(const ChainFactory& factory, const StopPredicate& stop, std::size_t max_iterations) {
    ChainResult chain;
    for (std::size_t k = 1;; ++k) {
        if (k > max_iterations) throw error("runaway chain");
        auto step = factory(k, chain.iterations);
        if (!step) break;
        chain.iterations.push_back((*step)());
        if (stop(k, chain.iterations.back())) break;
    }
    return chain;
}

}  // namespace ngram::engine
