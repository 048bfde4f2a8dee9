#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tha/error.hpp"

namespace tha {

/// Alice's encoded polarization symbol.
enum class Symbol : std::uint8_t { H = 0, V = 1, D = 2 };

inline constexpr std::array<Symbol, 3> kAllSymbols{Symbol::H, Symbol::V, Symbol::D};

constexpr std::size_t index_of(Symbol s) noexcept { return static_cast<std::size_t>(s); }

constexpr char to_char(Symbol s) noexcept {
  switch (s) {
    case Symbol::H: return 'H';
    case Symbol::V: return 'V';
    case Symbol::D: return 'D';
  }
  return '?';
}

inline Symbol symbol_from_char(char c) {
  switch (c) {
    case 'H': return Symbol::H;
    case 'V': return Symbol::V;
    case 'D': return Symbol::D;
    default: throw DomainError(std::string("unknown symbol '") + c + "'");
  }
}

/// Non-empty sequence of encoded symbols.
class SymbolSequence {
 public:
  SymbolSequence() = default;
  explicit SymbolSequence(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.empty()) throw ConfigError("symbol sequence must be non-empty");
  }

  /// Uniformly random sequence (priors 1/3 each), deterministic in `seed`.
  static SymbolSequence random(std::size_t n, std::uint64_t seed);

  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  std::array<std::size_t, 3> counts() const;

 private:
  std::vector<Symbol> symbols_;
};

}  // namespace tha
