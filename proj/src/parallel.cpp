#include "vqrd/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vqrd::parallel {

std::vector<ChunkRange> make_chunks(std::int64_t n, std::int64_t chunk) {
    std::vector<ChunkRange> out;
    if (n <= 0) return out;
    if (chunk <= 0) chunk = n;
    std::int64_t idx = 0;
    for (std::int64_t b = 0; b < n; b += chunk) {
        out.push_back({idx++, b, std::min(n, b + chunk)});
    }
    return out;
}

void for_each_chunk_serial(std::int64_t n, std::int64_t chunk,
                           const std::function<void(const ChunkRange&)>& fn) {
    for (const auto& c : make_chunks(n, chunk)) fn(c);
}

void for_each_chunk_omp(std::int64_t n, std::int64_t chunk,
                        const std::function<void(const ChunkRange&)>& fn) {
    const auto chunks = make_chunks(n, chunk);
    const std::int64_t m = static_cast<std::int64_t>(chunks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < m; ++i) fn(chunks[static_cast<size_t>(i)]);
}

void for_each_chunk(std::int64_t n, std::int64_t chunk,
                    const std::function<void(const ChunkRange&)>& fn) {
#ifdef _OPENMP
    for_each_chunk_omp(n, chunk, fn);
#else
    for_each_chunk_serial(n, chunk, fn);
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace {

double sum_over(const ChunkRange& c, const std::function<double(std::int64_t)>& term) {
    double s = 0.0;
    for (std::int64_t i = c.begin; i < c.end; ++i) s += term(i);
    return s;
}

}  // namespace

double sum_chunked_serial(std::int64_t n, std::int64_t chunk,
                          const std::function<double(std::int64_t)>& term) {
    double total = 0.0;
    for (const auto& c : make_chunks(n, chunk)) total += sum_over(c, term);
    return total;
}

double sum_chunked_omp(std::int64_t n, std::int64_t chunk,
                       const std::function<double(std::int64_t)>& term) {
    const auto chunks = make_chunks(n, chunk);
    std::vector<double> partial(chunks.size(), 0.0);
    const std::int64_t m = static_cast<std::int64_t>(chunks.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (std::int64_t i = 0; i < m; ++i) {
        partial[static_cast<size_t>(i)] = sum_over(chunks[static_cast<size_t>(i)], term);
    }
    double total = 0.0;
    for (double p : partial) total += p;  // fixed order
    return total;
}

double sum_chunked(std::int64_t n, std::int64_t chunk,
                   const std::function<double(std::int64_t)>& term) {
#ifdef _OPENMP
    return sum_chunked_omp(n, chunk, term);
#else
    return sum_chunked_serial(n, chunk, term);
#endif
}

}  // namespace vqrd::parallel
