#include "spectrank/rng.hpp"

#include <cmath>
#include <numbers>

#include "spectrank/errors.hpp"

namespace spectrank {

namespace {

constexpr uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr uint32_t kPhiloxW1 = 0xBB67AE85u;

struct Philox4x32Block {
  uint32_t x[4];
};

inline Philox4x32Block philox4x32_10(uint64_t counter, uint64_t stream,
                                     uint64_t key64) {
  uint32_t c0 = static_cast<uint32_t>(counter);
  uint32_t c1 = static_cast<uint32_t>(counter >> 32);
  uint32_t c2 = static_cast<uint32_t>(stream);
  uint32_t c3 = static_cast<uint32_t>(stream >> 32);
  uint32_t k0 = static_cast<uint32_t>(key64);
  uint32_t k1 = static_cast<uint32_t>(key64 >> 32);
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    const uint64_t p0 = static_cast<uint64_t>(kPhiloxM0) * c0;
    const uint64_t p1 = static_cast<uint64_t>(kPhiloxM1) * c2;
    const uint32_t n0 = static_cast<uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const uint32_t n1 = static_cast<uint32_t>(p1);
    const uint32_t n2 = static_cast<uint32_t>(p0 >> 32) ^ c3 ^ k1;
    const uint32_t n3 = static_cast<uint32_t>(p0);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
  }
  return {{c0, c1, c2, c3}};
}

// splitmix64 finalizer; full-avalanche 64-bit mix.
inline uint64_t mix64(uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double standard_normal(RngState& rng) {
  const double u1 = rng.uniform_open01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace

RngState RngState::substream(uint64_t index) const {
  return RngState(seed_, mix64(stream_ ^ mix64(index)));
}

uint64_t RngState::next_u64() {
  const Philox4x32Block b = philox4x32_10(counter_++, stream_, seed_);
  return (static_cast<uint64_t>(b.x[0]) << 32) | b.x[1];
}

double RngState::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngState::uniform_open01() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

uint64_t stream_hash(std::string_view experiment, uint64_t point,
                     uint64_t run) {
  uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a offset basis
  for (const char ch : experiment) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001B3ull;
  }
  h = mix64(h ^ mix64(point));
  return mix64(h ^ mix64(run));
}

double gamma_sample(double shape, RngState& rng) {
  if (!(shape > 0.0)) {
    throw ParamError("gamma_sample: shape must be > 0");
  }
  if (shape < 1.0) {
    const double u = rng.uniform_open01();
    return gamma_sample(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) {
      return d * v;
    }
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

std::vector<double> dirichlet_sample(std::span<const double> alphas,
                                     RngState& rng) {
  if (alphas.empty()) {
    throw ParamError("dirichlet_sample: empty alpha vector");
  }
  std::vector<double> out(alphas.size());
  double total = 0.0;
  for (size_t i = 0; i < alphas.size(); ++i) {
    if (!(alphas[i] > 0.0)) {
      throw ParamError("dirichlet_sample: alphas must be > 0");
    }
    out[i] = gamma_sample(alphas[i], rng);
    total += out[i];
  }
  for (double& v : out) {
    v /= total;
  }
  return out;
}

int categorical_sample(std::span<const double> probs, RngState& rng) {
  if (probs.empty()) {
    throw ParamError("categorical_sample: empty probability vector");
  }
  double total = 0.0;
  for (const double p : probs) {
    if (!(p >= 0.0)) {
      throw ParamError("categorical_sample: negative probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ParamError("categorical_sample: probabilities do not sum to 1");
  }
  const double u = rng.uniform01();
  double cum = 0.0;
  int last_positive = 0;
  for (size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) {
      last_positive = static_cast<int>(i);
    }
    cum += probs[i];
    if (u < cum) {
      return static_cast<int>(i);
    }
  }
  // u fell into the rounding sliver past the accumulated sum.
  return last_positive;
}

double gaussian_sample(double mean, double variance, RngState& rng) {
  if (!(variance > 0.0)) {
    throw ParamError("gaussian_sample: variance must be > 0");
  }
  return mean + std::sqrt(variance) * standard_normal(rng);
}

std::vector<double> gaussian_vector_sample(std::span<const double> mean,
                                           double variance, RngState& rng) {
  if (!(variance > 0.0)) {
    throw ParamError("gaussian_vector_sample: variance must be > 0");
  }
  std::vector<double> out(mean.size());
  const double sd = std::sqrt(variance);
  for (size_t j = 0; j < mean.size(); ++j) {
    out[j] = mean[j] + sd * standard_normal(rng);
  }
  return out;
}

}  // namespace spectrank
