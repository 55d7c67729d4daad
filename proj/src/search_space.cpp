#include "mixedbo/search_space.hpp"

#include <algorithm>
#include <set>

#include "mixedbo/error.hpp"

namespace mixedbo {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string value_repr(const Value& v) {
  return std::visit(Overloaded{[](double d) { return std::to_string(d); },
                               [](std::int64_t i) { return std::to_string(i); },
                               [](const std::string& s) { return '"' + s + '"'; }},
                    v);
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::SingularModel: return "singular-model";
    case ErrorCode::SamplerStuck: return "sampler-stuck";
    case ErrorCode::InsufficientData: return "insufficient-data";
    case ErrorCode::InvalidObservation: return "invalid-observation";
    case ErrorCode::GridTooLarge: return "grid-too-large";
    case ErrorCode::IncompleteGrid: return "incomplete-grid";
    case ErrorCode::Io: return "io";
    case ErrorCode::Objective: return "objective";
  }
  return "unknown";
}

SearchSpace::SearchSpace(std::vector<Dimension> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw Error(ErrorCode::InvalidArgument, "search space needs at least one dimension");
  }
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    offsets_.push_back(encoded_width_);
    std::visit(
        Overloaded{
            [&](const RealDim& r) {
              if (!std::isfinite(r.lower) || !std::isfinite(r.upper) || !(r.lower < r.upper)) {
                throw Error(ErrorCode::InvalidArgument,
                            "real dimension " + std::to_string(d) + " needs finite lower < upper");
              }
              lower_.push_back(r.lower);
              upper_.push_back(r.upper);
              encoded_width_ += 1;
            },
            [&](const IntegerDim& i) {
              if (i.lower > i.upper) {
                throw Error(ErrorCode::InvalidArgument,
                            "integer dimension " + std::to_string(d) + " needs lower <= upper");
              }
              lower_.push_back(static_cast<double>(i.lower));
              upper_.push_back(static_cast<double>(i.upper));
              encoded_width_ += 1;
            },
            [&](const CategoricalDim& c) {
              std::set<std::string> distinct(c.labels.begin(), c.labels.end());
              if (c.labels.size() < 2 || distinct.size() != c.labels.size()) {
                throw Error(ErrorCode::InvalidArgument, "categorical dimension " +
                                                            std::to_string(d) +
                                                            " needs at least 2 distinct labels");
              }
              for (std::size_t k = 0; k < c.labels.size(); ++k) {
                lower_.push_back(0.0);
                upper_.push_back(1.0);
              }
              encoded_width_ += c.labels.size();
            }},
        dims_[d]);
  }
}

SearchSpace SearchSpace::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dims") || !j["dims"].is_array()) {
    throw Error(ErrorCode::InvalidArgument, "space JSON must be an object with a \"dims\" array");
  }
  std::vector<Dimension> dims;
  try {
    for (const auto& d : j["dims"]) {
      const std::string kind = d.at("kind").get<std::string>();
      if (kind == "real") {
        dims.emplace_back(RealDim{d.at("lower").get<double>(), d.at("upper").get<double>()});
      } else if (kind == "integer") {
        dims.emplace_back(
            IntegerDim{d.at("lower").get<std::int64_t>(), d.at("upper").get<std::int64_t>()});
      } else if (kind == "categorical") {
        dims.emplace_back(CategoricalDim{d.at("labels").get<std::vector<std::string>>()});
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown dimension kind '" + kind + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed space JSON: ") + e.what());
  }
  return SearchSpace(std::move(dims));
}

nlohmann::json SearchSpace::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& dim : dims_) {
    std::visit(Overloaded{[&](const RealDim& r) {
                            arr.push_back({{"kind", "real"}, {"lower", r.lower}, {"upper", r.upper}});
                          },
                          [&](const IntegerDim& i) {
                            arr.push_back(
                                {{"kind", "integer"}, {"lower", i.lower}, {"upper", i.upper}});
                          },
                          [&](const CategoricalDim& c) {
                            arr.push_back({{"kind", "categorical"}, {"labels", c.labels}});
                          }},
               dim);
  }
  return {{"dims", arr}};
}

bool SearchSpace::contains(std::span<const double> p) const {
  if (p.size() != encoded_width_) return false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k]) || p[k] < lower_[k] || p[k] > upper_[k]) return false;
  }
  return true;
}

std::size_t SearchSpace::num_real_dims() const {
  return static_cast<std::size_t>(std::count_if(dims_.begin(), dims_.end(), [](const Dimension& d) {
    return std::holds_alternative<RealDim>(d);
  }));
}

std::size_t SearchSpace::num_discrete_combinations() const {
  std::size_t n = 1;
  for (const auto& dim : dims_) {
    if (const auto* i = std::get_if<IntegerDim>(&dim)) {
      n *= static_cast<std::size_t>(i->upper - i->lower + 1);
    } else if (const auto* c = std::get_if<CategoricalDim>(&dim)) {
      n *= c->labels.size();
    }
  }
  return n;
}

void SearchSpace::validate(const Config& config) const {
  if (config.values.size() != dims_.size()) {
    throw Error(ErrorCode::InvalidConfig, "config has " + std::to_string(config.values.size()) +
                                              " values, space has " +
                                              std::to_string(dims_.size()) + " dimensions");
  }
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const Value& v = config.values[d];
    const auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::InvalidConfig,
                  "dimension " + std::to_string(d) + ": value " + value_repr(v) + " " + why);
    };
    std::visit(Overloaded{[&](const RealDim& r) {
                            const double* x = std::get_if<double>(&v);
                            if (!x) fail("is not a real number");
                            if (!std::isfinite(*x) || *x < r.lower || *x > r.upper) {
                              fail("is out of range");
                            }
                          },
                          [&](const IntegerDim& i) {
                            const std::int64_t* x = std::get_if<std::int64_t>(&v);
                            if (!x) fail("is not an integer");
                            if (*x < i.lower || *x > i.upper) fail("is out of range");
                          },
                          [&](const CategoricalDim& c) {
                            const std::string* x = std::get_if<std::string>(&v);
                            if (!x) fail("is not a label");
                            if (std::find(c.labels.begin(), c.labels.end(), *x) == c.labels.end()) {
                              fail("is not a declared label");
                            }
                          }},
               dims_[d]);
  }
}

RelaxedPoint SearchSpace::encode(const Config& config) const {
  validate(config);
  RelaxedPoint p(encoded_width_, 0.0);
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const std::size_t at = offsets_[d];
    std::visit(Overloaded{[&](const RealDim&) { p[at] = std::get<double>(config.values[d]); },
                          [&](const IntegerDim&) {
                            p[at] = static_cast<double>(std::get<std::int64_t>(config.values[d]));
                          },
                          [&](const CategoricalDim& c) {
                            const auto& label = std::get<std::string>(config.values[d]);
                            const auto idx = std::find(c.labels.begin(), c.labels.end(), label) -
                                             c.labels.begin();
                            p[at + static_cast<std::size_t>(idx)] = 1.0;
                          }},
               dims_[d]);
  }
  return p;
}

void SearchSpace::transform_in_place(std::span<double> p) const {
  if (p.size() != encoded_width_) {
    throw Error(ErrorCode::Dimension, "point has width " + std::to_string(p.size()) +
                                          ", expected " + std::to_string(encoded_width_));
  }
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const std::size_t at = offsets_[d];
    if (std::holds_alternative<IntegerDim>(dims_[d])) {
      p[at] = std::clamp(round_half_up(p[at]), lower_[at], upper_[at]);
    } else if (const auto* c = std::get_if<CategoricalDim>(&dims_[d])) {
      const std::size_t n = c->labels.size();
      std::size_t best = 0;
      for (std::size_t k = 1; k < n; ++k) {
        if (p[at + k] > p[at + best]) best = k;
      }
      for (std::size_t k = 0; k < n; ++k) p[at + k] = (k == best) ? 1.0 : 0.0;
    }
  }
}

RelaxedPoint SearchSpace::transform(std::span<const double> p) const {
  RelaxedPoint out(p.begin(), p.end());
  transform_in_place(out);
  return out;
}

Config SearchSpace::decode(std::span<const double> p) const {
  const RelaxedPoint t = transform(p);
  Config config;
  config.values.reserve(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const std::size_t at = offsets_[d];
    std::visit(
        Overloaded{[&](const RealDim& r) {
                     config.values.emplace_back(std::clamp(t[at], r.lower, r.upper));
                   },
                   [&](const IntegerDim&) {
                     config.values.emplace_back(static_cast<std::int64_t>(t[at]));
                   },
                   [&](const CategoricalDim& c) {
                     std::size_t k = 0;
                     while (t[at + k] != 1.0) ++k;
                     config.values.emplace_back(c.labels[k]);
                   }},
        dims_[d]);
  }
  return config;
}

RelaxedPoint SearchSpace::sample_uniform(Rng& rng) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RelaxedPoint p(encoded_width_);
  for (std::size_t k = 0; k < encoded_width_; ++k) {
    p[k] = lower_[k] + unit(rng) * (upper_[k] - lower_[k]);
  }
  return p;
}

RelaxedPoint SearchSpace::sample_uniform(std::uint64_t seed) const {
  Rng rng(seed);
  return sample_uniform(rng);
}

nlohmann::json SearchSpace::config_to_json(const Config& config) const {
  validate(config);
  nlohmann::json arr = nlohmann::json::array();
  for (const Value& v : config.values) {
    std::visit([&](const auto& x) { arr.push_back(x); }, v);
  }
  return arr;
}

Config SearchSpace::config_from_json(const nlohmann::json& j) const {
  if (!j.is_array() || j.size() != dims_.size()) {
    throw Error(ErrorCode::InvalidConfig,
                "config JSON must be an array of " + std::to_string(dims_.size()) + " values");
  }
  Config config;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const auto& e = j[d];
    if (std::holds_alternative<RealDim>(dims_[d])) {
      if (!e.is_number()) throw Error(ErrorCode::InvalidConfig, "expected a number at " + std::to_string(d));
      config.values.emplace_back(e.get<double>());
    } else if (std::holds_alternative<IntegerDim>(dims_[d])) {
      if (e.is_number_integer()) {
        config.values.emplace_back(e.get<std::int64_t>());
      } else if (e.is_number_float() && std::floor(e.get<double>()) == e.get<double>()) {
        config.values.emplace_back(static_cast<std::int64_t>(e.get<double>()));
      } else {
        throw Error(ErrorCode::InvalidConfig, "expected an integer at " + std::to_string(d));
      }
    } else {
      if (!e.is_string()) throw Error(ErrorCode::InvalidConfig, "expected a label at " + std::to_string(d));
      config.values.emplace_back(e.get<std::string>());
    }
  }
  validate(config);
  return config;
}

}  // namespace mixedbo
