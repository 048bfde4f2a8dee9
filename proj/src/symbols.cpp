#include "tha/symbols.hpp"

#include "tha/detectors.hpp"
#include "tha/rng.hpp"

namespace tha {

SymbolSequence SymbolSequence::random(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ConfigError("symbol sequence must be non-empty");
  Rng rng = make_rng(seed, 0x5359u);
  std::vector<Symbol> s(n);
  for (auto& x : s) x = static_cast<Symbol>(uniform3(rng));
  return SymbolSequence(std::move(s));
}

std::array<std::size_t, 3> SymbolSequence::counts() const {
  std::array<std::size_t, 3> c{};
  for (Symbol s : symbols_) ++c[index_of(s)];
  return c;
}

}  // namespace tha
