#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace mixedbo {

using Rng = std::mt19937_64;

/// A point of the continuous relaxation: one coordinate per real or integer
/// dimension, one coordinate per label of each categorical dimension.
using RelaxedPoint = std::vector<double>;

struct RealDim {
  double lower = 0.0;
  double upper = 1.0;
  bool operator==(const RealDim&) const = default;
};

struct IntegerDim {
  std::int64_t lower = 0;
  std::int64_t upper = 1;
  bool operator==(const IntegerDim&) const = default;
};

struct CategoricalDim {
  std::vector<std::string> labels;  // declaration order is the one-hot order
  bool operator==(const CategoricalDim&) const = default;
};

using Dimension = std::variant<RealDim, IntegerDim, CategoricalDim>;

/// Value assigned to one dimension of a configuration.
using Value = std::variant<double, std::int64_t, std::string>;

/// A configuration the objective can actually be evaluated at.
struct Config {
  std::vector<Value> values;
  bool operator==(const Config&) const = default;
};

class SearchSpace {
 public:
  explicit SearchSpace(std::vector<Dimension> dims);

  static SearchSpace from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<Dimension>& dims() const { return dims_; }
  std::size_t num_dims() const { return dims_.size(); }
  std::size_t encoded_width() const { return encoded_width_; }
  /// First encoded coordinate of dimension `dim`.
  std::size_t offset(std::size_t dim) const { return offsets_[dim]; }

  const std::vector<double>& lower_bounds() const { return lower_; }
  const std::vector<double>& upper_bounds() const { return upper_; }
  bool contains(std::span<const double> p) const;

  std::size_t num_real_dims() const;
  /// Number of distinct integer/categorical combinations.
  std::size_t num_discrete_combinations() const;

  RelaxedPoint encode(const Config& config) const;
  RelaxedPoint transform(std::span<const double> p) const;
  void transform_in_place(std::span<double> p) const;
  Config decode(std::span<const double> p) const;

  RelaxedPoint sample_uniform(std::uint64_t seed) const;
  RelaxedPoint sample_uniform(Rng& rng) const;

  /// Throws InvalidConfig when `config` does not conform to this space.
  void validate(const Config& config) const;

  /// Configs travel as JSON arrays: numbers for real and integer dimensions,
  /// strings for categorical ones, e.g. `[0.25, 3, "relu"]`.
  nlohmann::json config_to_json(const Config& config) const;
  Config config_from_json(const nlohmann::json& j) const;

  bool operator==(const SearchSpace& other) const { return dims_ == other.dims_; }

 private:
  std::vector<Dimension> dims_;
  std::vector<std::size_t> offsets_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::size_t encoded_width_ = 0;
};

/// Nearest integer with ties going up (2.5 -> 3, -2.5 -> -2).
inline double round_half_up(double x) { return std::floor(x + 0.5); }

}  // namespace mixedbo
