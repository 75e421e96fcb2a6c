#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>

namespace bandit::rng {

/// SplitMix64 output function (Vigna). Also used as the mixing step when
/// deriving substream seeds from integer keys.
constexpr std::uint64_t hash64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Folds (seed, key...) into one 64-bit substream seed. This is the
/// documented splitting function: every parallel unit of work (realization,
/// step, policy stream, ...) derives its generator seed through it, so
/// results never depend on scheduling order.
template <class... Keys>
constexpr std::uint64_t derive_seed(std::uint64_t seed, Keys... keys) noexcept {
  std::uint64_t h = hash64(seed);
  ((h = hash64(h ^ hash64(static_cast<std::uint64_t>(keys)))), ...);
  return h;
}

/// Counter-based generator (SplitMix64 sequence). Cheap to construct, used
/// for the handful of per-step environment draws.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seeded random stream identified by (seed, stream_id). Identical pairs
/// reproduce identical draw sequences; distinct stream ids are derived
/// through hash64 and behave as independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(derive_seed(seed, stream_id)) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Child stream keyed by an extra tag; deterministic in (seed, stream, tag).
  RngStream fork(std::uint64_t tag) const {
    return RngStream(seed_, derive_seed(stream_id_, tag));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

/// Uniform on [0, 1) with 53-bit resolution.
template <class G>
double uniform01(G& g) {
  return static_cast<double>(g.next_u64() >> 11) * 0x1.0p-53;
}

/// Uniform on (0, 1]; safe under log().
template <class G>
double uniform01_pos(G& g) {
  return (static_cast<double>(g.next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform index in [0, n).
template <class G>
std::size_t uniform_index(G& g, std::size_t n) {
  const auto i = static_cast<std::size_t>(uniform01(g) * static_cast<double>(n));
  return i < n ? i : n - 1;
}

namespace detail {

// 256-layer ziggurat tables for the standard normal (Doornik-style setup).
struct ZigguratTables {
  static constexpr int kLayers = 256;
  static constexpr double kR = 3.6541528853610088;
  static constexpr double kV = 4.92867323399e-3;
  double x[kLayers + 1];
  double ratio[kLayers];

  ZigguratTables() {
    const double f_r = std::exp(-0.5 * kR * kR);
    x[0] = kV / f_r;
    x[1] = kR;
    x[kLayers] = 0.0;
    for (int i = 2; i < kLayers; ++i) {
      x[i] = std::sqrt(-2.0 * std::log(kV / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
    }
    for (int i = 0; i < kLayers; ++i) ratio[i] = x[i + 1] / x[i];
  }
};

inline const ZigguratTables& ziggurat() {
  static const ZigguratTables tables;
  return tables;
}

}  // namespace detail

/// Standard normal draw (ziggurat with exact wedge/tail rejection).
template <class G>
double normal(G& g) {
  const auto& zt = detail::ziggurat();
  for (;;) {
    const std::uint64_t bits = g.next_u64();
    const int layer = static_cast<int>(bits & 0xff);
    // Signed uniform in (-1, 1) from the top 53 bits.
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-52 - 1.0;
    if (std::abs(u) < zt.ratio[layer]) return u * zt.x[layer];
    if (layer == 0) {
      // Tail beyond kR.
      double xx, yy;
      do {
        xx = -std::log(uniform01_pos(g)) / detail::ZigguratTables::kR;
        yy = -std::log(uniform01_pos(g));
      } while (yy + yy < xx * xx);
      const double t = detail::ZigguratTables::kR + xx;
      return u < 0.0 ? -t : t;
    }
    const double x = u * zt.x[layer];
    const double f0 = std::exp(-0.5 * (zt.x[layer] * zt.x[layer] - x * x));
    const double f1 = std::exp(-0.5 * (zt.x[layer + 1] * zt.x[layer + 1] - x * x));
    if (f0 + uniform01(g) * (f1 - f0) < 1.0) return x;
  }
}

/// Gamma(shape, scale 1) via Marsaglia-Tsang squeeze; boosted for shape < 1.
template <class G>
double gamma_draw(G& g, double shape) {
  if (shape < 1.0) {
    const double u = uniform01_pos(g);
    return gamma_draw(g, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double z, v;
    do {
      z = normal(g);
      v = 1.0 + c * z;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform01_pos(g);
    const double zz = z * z;
    if (u < 1.0 - 0.0331 * zz * zz) return d * v;
    if (std::log(u) < 0.5 * zz + d * (1.0 - v + std::log(v))) return d * v;
  }
}

/// Beta(a, b) as the ratio of two gamma draws.
template <class G>
double beta_draw(G& g, double a, double b) {
  const double x = gamma_draw(g, a);
  const double y = gamma_draw(g, b);
  const double s = x + y;
  if (s <= 0.0) return a / (a + b);  // both draws underflowed
  return x / s;
}

}  // namespace bandit::rng
