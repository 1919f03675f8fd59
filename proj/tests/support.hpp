#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "thompson_clt/word.hpp"

namespace thompson_clt::testing {

  inline std::mt19937_64 rng(std::uint64_t salt = 0) {
    return std::mt19937_64(0x5eed'7a11'0f00'd5ULL ^ salt);
  }

  inline Word random_word(std::mt19937_64& g, std::size_t len, Natural max_index) {
    std::uniform_int_distribution<Natural> idx(0, max_index);
    std::bernoulli_distribution plus(0.5);
    std::vector<Letter> letters;
    for (std::size_t k = 0; k < len; ++k) {
      letters.push_back({idx(g), plus(g) ? Sign::plus : Sign::minus});
    }
    return Word(std::move(letters));
  }

  inline Word random_word_up_to(std::mt19937_64& g, std::size_t max_len, Natural max_index) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    return random_word(g, len(g), max_index);
  }

  // A random word followed by its formal inverse.
  inline Word random_neutral(std::mt19937_64& g, std::size_t half, Natural max_index) {
    Word const u = random_word(g, half, max_index);
    return u + formal_inverse(u);
  }

}  // namespace thompson_clt::testing
