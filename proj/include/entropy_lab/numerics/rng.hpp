#pragma once

#include <array>
#include <cstdint>
#include <variant>

namespace entropy_lab::numerics {

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// SplitMix64 finalizer, used to derive keys for child streams.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based random stream.
///
/// The pair (master_seed, stream_index) fully determines the sequence: the
/// seed is the Philox key and the stream index occupies the upper half of
/// the 128-bit counter, the lower half counting blocks. Streams are cheap
/// value types; a worker constructs the stream for replication i directly,
/// which makes Monte Carlo output independent of scheduling.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  /// Independent stream for a named sub-task of this one.
  RngStream child(std::uint64_t tag) const;

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform01();

  /// Marsaglia polar method; the spare variate is cached.
  double std_normal();

  /// Marsaglia-Tsang; shape < 1 handled by the U^{1/shape} boost.
  double gamma(double shape, double scale);

  double chi_square(double df);

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Uniform01 {};
struct StdNormal {};
struct GammaDist {
  double shape;
  double scale;
};
struct ChiSquare {
  double df;
};

using Distribution = std::variant<Uniform01, StdNormal, GammaDist, ChiSquare>;

/// One draw from `dist`. Throws DomainError for non-positive parameters.
double sample(const Distribution& dist, RngStream& stream);

}  // namespace entropy_lab::numerics
