#include "adatest/bitvec.hpp"

#include "adatest/error.hpp"

namespace adatest {

BitVector::BitVector(std::size_t size, bool value)
    : size_(size), words_(word_count(size), value ? ~Word{0} : Word{0}) {
  clear_tail();
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw InputError("bit string contains '" + std::string(1, bits[i]) +
                       "' at position " + std::to_string(i));
    }
  }
  return v;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (get(i)) s[i] = '1';
  }
  return s;
}

std::size_t BitVector::popcount() const noexcept {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t BitVector::hamming_distance(const BitVector& other) const noexcept {
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(words_[i] ^ other.words_[i]));
  }
  return n;
}

BitVector BitVector::operator~() const {
  BitVector out = *this;
  for (Word& w : out.words_) w = ~w;
  out.clear_tail();
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

void BitVector::clear_tail() noexcept {
  if (const std::size_t rem = size_ % kWordBits; rem != 0) {
    words_.back() &= (Word{1} << rem) - 1;
  }
}

}  // namespace adatest
