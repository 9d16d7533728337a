#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace vqrd::parallel {

// Fixed-size chunking over [0, n). Work is split into chunks of `chunk`
// items; chunk results are combined in chunk-index order, so the result of
// a chunked reduction is independent of the number of threads (and equal,
// bit for bit, to the serial variant that walks the same chunks in order).

struct ChunkRange {
    std::int64_t index;
    std::int64_t begin;
    std::int64_t end;
};

std::vector<ChunkRange> make_chunks(std::int64_t n, std::int64_t chunk);

// Runs fn over every chunk. The OpenMP variant may execute chunks in any
// order on any thread; fn must only touch state owned by its chunk index.
void for_each_chunk_serial(std::int64_t n, std::int64_t chunk,
                           const std::function<void(const ChunkRange&)>& fn);
void for_each_chunk_omp(std::int64_t n, std::int64_t chunk,
                        const std::function<void(const ChunkRange&)>& fn);

// Default entry point: OpenMP when compiled in, serial otherwise.
void for_each_chunk(std::int64_t n, std::int64_t chunk,
                    const std::function<void(const ChunkRange&)>& fn);

bool openmp_enabled();
int max_threads();

// Chunked sum with deterministic (chunk-ordered) reduction.
// `term` must be a pure function of the index.
double sum_chunked_serial(std::int64_t n, std::int64_t chunk,
                          const std::function<double(std::int64_t)>& term);
double sum_chunked_omp(std::int64_t n, std::int64_t chunk,
                       const std::function<double(std::int64_t)>& term);
double sum_chunked(std::int64_t n, std::int64_t chunk,
                   const std::function<double(std::int64_t)>& term);

}  // namespace vqrd::parallel
