#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace snd {

/// Worker count: SND_THREADS if set (>= 1), else hardware concurrency.
std::size_t worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads.
/// Exceptions from workers are rethrown (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

/// Locale-independent fixed-format decimal.
std::string format_fixed(double value, int precision = 6);

/// 64-bit FNV-1a over a file's bytes, hex encoded. Empty string if unreadable.
std::string file_digest(const std::string& path);

/// Integer units for real masses sharing one denominator.
struct IntegerMasses {
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> second;
  std::int64_t scale = 1;  ///< mass == units / scale
};

/// Finds a common denominator for two nonnegative mass vectors. Masses that
/// are rationals with small denominators convert exactly; anything else is
/// rounded on a 2^20 grid. Throws std::invalid_argument on negative or
/// non-finite input.
IntegerMasses to_integer_masses(std::span<const double> first,
                                std::span<const double> second);

/// Independent sub-seed for stream `stream` of a run seeded with `seed`
/// (SplitMix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Smallest denominator q <= max_den with |x - p/q| tiny, or 0 if none.
std::int64_t rational_denominator(double x, std::int64_t max_den);

}  // namespace snd
