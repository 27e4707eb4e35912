#include "corxc/random.hpp"

#include <limits>

#include "corxc/error.hpp"

namespace corxc {

std::int64_t PortableRandom::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgument("empty range in PortableRandom::uniform");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + x % span);
}

bool PortableRandom::bernoulli(std::uint64_t num, std::uint64_t den) {
  if (den == 0 || num > den) throw InvalidArgument("bad probability in PortableRandom::bernoulli");
  return static_cast<std::uint64_t>(uniform(0, static_cast<std::int64_t>(den) - 1)) < num;
}

}  // namespace corxc
