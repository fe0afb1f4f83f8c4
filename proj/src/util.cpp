#include "snd/util.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iterator>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "snd/types.hpp"

namespace snd {

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw std::invalid_argument("CostMatrix: data size does not match shape");
  }
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  CostMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("CostMatrix: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

std::int64_t CostMatrix::max_entry() const {
  if (data_.empty()) return 0;
  return *std::max_element(data_.begin(), data_.end());
}

std::size_t worker_count() {
  if (const char* env = std::getenv("SND_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

namespace {
thread_local bool in_worker = false;  // nested calls run serially
}  // namespace

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = in_worker ? 1 : std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    in_worker = true;
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  }
  if (failure) std::rethrow_exception(failure);
}

std::string format_fixed(double value, int precision) {
  if (value == 0.0) value = 0.0;  // drop negative zero
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::fixed,
                                 precision);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, ptr);
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::uint64_t hash = 14695981039346656037ULL;
  std::istreambuf_iterator<char> it(in), end;
  for (; it != end; ++it) {
    hash ^= static_cast<unsigned char>(*it);
    hash *= 1099511628211ULL;
  }
  char buf[17];
  auto [ptr, ec] = std::to_chars(buf, buf + 16, hash, 16);
  std::string hex(buf, ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::int64_t rational_denominator(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) return 0;
  if (x == std::floor(x)) return 1;
  const long double target = x;
  const long double tol = 1e-12L * std::max<long double>(1.0L, std::fabs(target));
  long double r = target;
  long double h_prev = 1, h_prev2 = 0;
  long double k_prev = 0, k_prev2 = 1;
  for (int iter = 0; iter < 64; ++iter) {
    const long double a = std::floor(r);
    const long double h = a * h_prev + h_prev2;
    const long double k = a * k_prev + k_prev2;
    if (k > static_cast<long double>(max_den)) return 0;
    if (std::fabs(target - h / k) <= tol) return static_cast<std::int64_t>(k);
    const long double rem = r - a;
    if (rem == 0) return static_cast<std::int64_t>(k);
    r = 1.0L / rem;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return 0;
}

IntegerMasses to_integer_masses(std::span<const double> first, std::span<const double> second) {
  constexpr std::int64_t kMaxDenominator = 1'000'000;
  constexpr std::int64_t kMaxScale = std::int64_t{1} << 32;
  constexpr std::int64_t kFallbackScale = std::int64_t{1} << 20;

  std::int64_t scale = 1;
  bool exact = true;
  auto scan = [&](std::span<const double> v) {
    for (double x : v) {
      if (!std::isfinite(x) || x < 0) {
        throw std::invalid_argument("histogram masses must be finite and nonnegative");
      }
      if (!exact || x == 0) continue;
      const std::int64_t q = rational_denominator(x, kMaxDenominator);
      if (q == 0) {
        exact = false;
        continue;
      }
      const std::int64_t l = std::lcm(scale, q);
      if (l > kMaxScale) {
        exact = false;
        continue;
      }
      scale = l;
    }
  };
  scan(first);
  scan(second);
  if (!exact) scale = kFallbackScale;

  auto convert = [&](std::span<const double> v) {
    std::vector<std::int64_t> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const long double u = static_cast<long double>(v[i]) * scale;
      if (u > 4.0e18L) throw std::invalid_argument("histogram mass too large");
      out[i] = static_cast<std::int64_t>(std::llround(u));
    }
    return out;
  };
  return IntegerMasses{convert(first), convert(second), scale};
}

}  // namespace snd
