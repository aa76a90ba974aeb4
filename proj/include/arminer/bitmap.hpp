#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace arminer {

// Fixed-size bitmap over transaction positions.
class Bitmap {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitmap() = default;
  explicit Bitmap(std::size_t size)
      : size_(size), words_((size + kWordBits - 1) / kWordBits, 0) {}

  std::size_t size() const noexcept { return size_; }
  std::span<const Word> words() const noexcept { return words_; }

  void set(std::size_t pos) { words_[pos / kWordBits] |= Word{1} << (pos % kWordBits); }

  bool test(std::size_t pos) const {
    return (words_[pos / kWordBits] >> (pos % kWordBits)) & 1U;
  }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  friend bool operator==(const Bitmap&, const Bitmap&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<Word> words_;
};

// Popcount of the AND of all operands. All operands must have the same size.
// An empty operand list has no defined universe, so callers handle it.
inline std::size_t intersection_count(std::span<const Bitmap* const> operands) {
  if (operands.empty()) return 0;
  const std::size_t n_words = operands.front()->words().size();
  if (operands.size() == 1) return operands.front()->count();

  std::size_t total = 0;
  // Blocked so the running AND stays in L1 while each operand streams through.
  constexpr std::size_t kBlock = 512;
  Bitmap::Word acc[kBlock];
  for (std::size_t base = 0; base < n_words; base += kBlock) {
    const std::size_t len = std::min(kBlock, n_words - base);
    const Bitmap::Word* first = operands[0]->words().data() + base;
    for (std::size_t i = 0; i < len; ++i) acc[i] = first[i];
    for (std::size_t k = 1; k < operands.size(); ++k) {
      const Bitmap::Word* w = operands[k]->words().data() + base;
      for (std::size_t i = 0; i < len; ++i) acc[i] &= w[i];
    }
    for (std::size_t i = 0; i < len; ++i) total += static_cast<std::size_t>(std::popcount(acc[i]));
  }
  return total;
}

}  // namespace arminer
