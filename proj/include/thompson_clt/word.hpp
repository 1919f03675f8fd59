#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson_clt/errors.hpp"

namespace thompson_clt {

  using Natural = std::uint64_t;

  enum class Sign : std::int8_t { minus = -1, plus = 1 };

  [[nodiscard]] constexpr Sign flip(Sign s) noexcept {
    return s == Sign::plus ? Sign::minus : Sign::plus;
  }

  [[nodiscard]] constexpr int to_int(Sign s) noexcept {
    return static_cast<int>(s);
  }

  [[nodiscard]] inline Natural checked_increment(Natural i) {
    if (i == std::numeric_limits<Natural>::max()) {
      throw overflow_error("generator index overflow");
    }
    return i + 1;
  }

  [[nodiscard]] inline Natural checked_decrement(Natural i) {
    if (i == 0) {
      throw internal_error("generator index underflow");
    }
    return i - 1;
  }

  // g_index^sign. Index is generic so the rewriting rules can run on symbolic
  // indices; everything outside the rewrite engine uses `Letter`.
  template <class Index>
  struct BasicLetter {
    Index index{};
    Sign sign = Sign::plus;

    friend bool operator==(BasicLetter const&, BasicLetter const&) = default;
  };

  using Letter = BasicLetter<Natural>;

  // Ordering used for all enumeration output: by index, then g^-1 before g.
  [[nodiscard]] inline std::strong_ordering operator<=>(Letter const& a, Letter const& b) noexcept {
    if (auto c = a.index <=> b.index; c != 0) {
      return c;
    }
    return to_int(a.sign) <=> to_int(b.sign);
  }

  [[nodiscard]] constexpr Letter gen(Natural i) noexcept {
    return {i, Sign::plus};
  }

  [[nodiscard]] constexpr Letter inv(Natural i) noexcept {
    return {i, Sign::minus};
  }

  // A formal tuple of letters. No free reduction is ever applied.
  class Word {
   public:
    using value_type     = Letter;
    using const_iterator = std::vector<Letter>::const_iterator;

    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}

    [[nodiscard]] std::size_t size() const noexcept {
      return letters_.size();
    }
    [[nodiscard]] bool empty() const noexcept {
      return letters_.empty();
    }
    [[nodiscard]] Letter const& operator[](std::size_t k) const {
      return letters_[k];
    }
    [[nodiscard]] const_iterator begin() const noexcept {
      return letters_.begin();
    }
    [[nodiscard]] const_iterator end() const noexcept {
      return letters_.end();
    }
    [[nodiscard]] std::vector<Letter> const& letters() const noexcept {
      return letters_;
    }

    void push_back(Letter l) {
      letters_.push_back(l);
    }

    // Letters k..k+len-1 (0-based).
    [[nodiscard]] Word sub_word(std::size_t k, std::size_t len) const {
      return Word(std::vector<Letter>(letters_.begin() + k, letters_.begin() + k + len));
    }

    friend Word operator+(Word const& a, Word const& b) {
      std::vector<Letter> out;
      out.reserve(a.size() + b.size());
      out.insert(out.end(), a.begin(), a.end());
      out.insert(out.end(), b.begin(), b.end());
      return Word(std::move(out));
    }

    friend bool operator==(Word const&, Word const&) = default;
    friend std::strong_ordering operator<=>(Word const& a, Word const& b) noexcept {
      return std::lexicographical_compare_three_way(
          a.letters_.begin(), a.letters_.end(), b.letters_.begin(), b.letters_.end());
    }

   private:
    std::vector<Letter> letters_;
  };

  // The formal inverse: reversed, every sign flipped.
  [[nodiscard]] inline Word formal_inverse(Word const& w) {
    std::vector<Letter> out;
    out.reserve(w.size());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
      out.push_back({it->index, flip(it->sign)});
    }
    return Word(std::move(out));
  }

  [[nodiscard]] inline std::int64_t sign_sum(Word const& w) noexcept {
    std::int64_t s = 0;
    for (auto const& l : w) {
      s += to_int(l.sign);
    }
    return s;
  }

  [[nodiscard]] inline Natural index_sum(Word const& w) {
    Natural s = 0;
    for (auto const& l : w) {
      if (l.index > std::numeric_limits<Natural>::max() - s) {
        throw overflow_error("index sum overflow");
      }
      s += l.index;
    }
    return s;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text grammar
  //
  //   word   := WS* (letter (WS+ letter)*)? WS*
  //   letter := "g" DIGITS ("^-1")? | DIGITS ("+" | "-")
  //   WS     := ' ' | '\t'
  ////////////////////////////////////////////////////////////////////////

  namespace detail {
    [[nodiscard]] constexpr bool is_ws(char c) noexcept {
      return c == ' ' || c == '\t';
    }
    [[nodiscard]] constexpr bool is_digit(char c) noexcept {
      return c >= '0' && c <= '9';
    }

    inline Natural parse_digits(std::string_view text, std::size_t& pos) {
      std::size_t const start = pos;
      if (pos >= text.size() || !is_digit(text[pos])) {
        throw parse_error("expected digit", pos);
      }
      Natural value = 0;
      constexpr Natural max = std::numeric_limits<Natural>::max();
      while (pos < text.size() && is_digit(text[pos])) {
        Natural const digit = static_cast<Natural>(text[pos] - '0');
        if (value > (max - digit) / 10) {
          throw overflow_error("generator index overflows 64 bits at offset "
                               + std::to_string(start));
        }
        value = value * 10 + digit;
        ++pos;
      }
      return value;
    }
  }  // namespace detail

  [[nodiscard]] inline Word parse_word(std::string_view text) {
    using detail::is_digit;
    using detail::is_ws;
    std::vector<Letter> letters;
    std::size_t pos = 0;
    auto skip_ws    = [&] {
      std::size_t const start = pos;
      while (pos < text.size() && is_ws(text[pos])) {
        ++pos;
      }
      return pos - start;
    };
    skip_ws();
    while (pos < text.size()) {
      char const c = text[pos];
      if (c == 'g') {
        ++pos;
        Natural idx = detail::parse_digits(text, pos);
        Sign sign   = Sign::plus;
        if (pos < text.size() && text[pos] == '^') {
          if (text.substr(pos, 3) != "^-1") {
            throw parse_error("expected \"^-1\"", pos);
          }
          pos += 3;
          sign = Sign::minus;
        }
        letters.push_back({idx, sign});
      } else if (is_digit(c)) {
        Natural idx = detail::parse_digits(text, pos);
        if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) {
          throw parse_error("expected '+' or '-' after index", pos);
        }
        letters.push_back({idx, text[pos] == '+' ? Sign::plus : Sign::minus});
        ++pos;
      } else {
        throw parse_error(std::string("unexpected character '") + c + "'", pos);
      }
      std::size_t const gap = skip_ws();
      if (pos < text.size() && gap == 0) {
        throw parse_error("letters must be separated by whitespace", pos);
      }
    }
    return Word(std::move(letters));
  }

  [[nodiscard]] inline std::string format_letter(Letter const& l) {
    std::string out = "g" + std::to_string(l.index);
    if (l.sign == Sign::minus) {
      out += "^-1";
    }
    return out;
  }

  [[nodiscard]] inline std::string format_word(Word const& w) {
    std::string out;
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k != 0) {
        out += ' ';
      }
      out += format_letter(w[k]);
    }
    return out;
  }

}  // namespace thompson_clt
