#pragma once

#include <stdexcept>
#include <cstddef>
#include <string>
#include <utility>

namespace ngram {

/// Base class for every failure raised by the toolkit. The message is the
/// stable, user-facing reason (e.g. "corrupt encoding", "invalid comparator").
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// An error raised while running an engine job; what() is the underlying
/// reason, job()/iteration() identify the failing job.
class job_error : public error {
public:
    job_error(const std::string& what, std::string job, std::size_t iteration)
        : error(what), m_job(std::move(job)), m_iteration(iteration) {}

    const std::string& job() const { return m_job; }
    std::size_t iteration() const { return m_iteration; }

private:
    std::string m_job;
    std::size_t m_iteration;
};

}  // namespace ngram
