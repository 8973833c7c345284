#include "fedhide/rng.hpp"

#include <sstream>

#include "fedhide/errors.hpp"

namespace fedhide {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t owner, Purpose purpose) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ owner);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  return Rng(h);
}

double Rng::normal() {
  // A fresh distribution per draw: no cached second variate, so the engine
  // state alone fully describes the stream.
  std::normal_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

double Rng::uniform() {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(engine_);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("Rng::below: n must be positive");
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(engine_);
}

std::string Rng::state() const {
  std::ostringstream os;
  os << engine_;
  return os.str();
}

void Rng::restore(const std::string& state) {
  std::istringstream is(state);
  is >> engine_;
  if (is.fail()) throw InvalidArgument("Rng::restore: malformed engine state");
}

NonPositiveDenominator::NonPositiveDenominator(double denominator)
    : Error("round-count denominator is not positive: " + std::to_string(denominator)),
      denominator_(denominator) {}

}  // namespace fedhide
