#include "netid/rng.hpp"

#include <cmath>
#include <numbers>

namespace netid {

namespace {
std::mt19937_64 seeded_engine(std::uint64_t seed, NoiseStream stream, std::uint32_t node) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), node};
  return std::mt19937_64(seq);
}
}  // namespace

GaussianSource::GaussianSource(std::uint64_t seed, NoiseStream stream, std::uint32_t node)
    : engine_(seeded_engine(seed, stream, node)) {}

double GaussianSource::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
  const double angle = 2.0 * std::numbers::pi * uniform_open();
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

}  // namespace netid
