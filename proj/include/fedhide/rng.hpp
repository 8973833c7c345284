#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace fedhide {

// What a random stream is used for. Streams for different purposes never
// share state, so e.g. adding an evaluation pass cannot shift the
// minibatch sequence a client sees.
enum class Purpose : std::uint64_t {
  kModelInit = 1,
  kPrototypeInit = 2,
  kProxyInit = 3,
  kBatch = 4,
  kProxy = 5,
  kSelection = 6,
  kEval = 7,
  kTrace = 8,
  kData = 9,
};

// Identifier used for streams owned by the server rather than a client.
inline constexpr std::uint64_t kServerStream = 0xFFFF'FFFFull;

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  // Independent stream keyed by (seed, owner, purpose).
  static Rng stream(std::uint64_t seed, std::uint64_t owner, Purpose purpose);

  double normal();
  double uniform();  // [0, 1)
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)

  std::mt19937_64& engine() noexcept { return engine_; }

  // Textual engine state; restore(state()) reproduces the stream exactly.
  std::string state() const;
  void restore(const std::string& state);

  friend bool operator==(const Rng& a, const Rng& b) { return a.engine_ == b.engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace fedhide
