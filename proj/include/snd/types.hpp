#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace snd {

using NodeId = std::uint32_t;

/// Nonnegative mass per bin.
using Histogram = std::vector<double>;

// Error hierarchy. The CLI maps these onto exit codes 2/3/4.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Well-formed input that violates a domain invariant.
class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

/// Bad or inconsistent configuration / parameters.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bank distances too small for the extended ground distance to stay metric.
class MetricityError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// The flow solver could not produce a plan (infeasible or overflow).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of integer transport costs.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, std::int64_t fill = 0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data);

  /// Square matrix from nested rows; throws std::invalid_argument on ragged input.
  static CostMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::int64_t& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::int64_t at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::int64_t max_entry() const;
  const std::vector<std::int64_t>& data() const { return data_; }

  bool operator==(const CostMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

/// Alias used where the matrix holds shortest-path lengths.
using GroundDistance = CostMatrix;

/// An exact transport cost: value == units / mass_scale.
struct ExactCost {
  std::int64_t units = 0;
  std::int64_t mass_scale = 1;

  double value() const {
    return static_cast<double>(units) / static_cast<double>(mass_scale);
  }
  friend bool operator==(const ExactCost& a, const ExactCost& b) {
    return static_cast<__int128>(a.units) * b.mass_scale ==
           static_cast<__int128>(b.units) * a.mass_scale;
  }
};

}  // namespace snd
