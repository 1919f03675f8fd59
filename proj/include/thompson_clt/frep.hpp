#pragma once

// Faithful representation of Thompson's group F by piecewise-linear
// homeomorphisms of [0,1] with dyadic breakpoints and power-of-two slopes.
// This is the ground truth every rewriting result is checked against.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "thompson_clt/dyadic.hpp"
#include "thompson_clt/errors.hpp"
#include "thompson_clt/word.hpp"

namespace thompson_clt {

  class PLMap {
   public:
    // The identity map.
    PLMap() : xs_{Dyadic(0), Dyadic(1)}, ys_{Dyadic(0), Dyadic(1)}, slopes_{0} {}

    // Breakpoints and values must describe a canonical map: strictly
    // increasing from (0,0) to (1,1), power-of-two slopes, no redundant
    // breakpoints. Throws domain_error otherwise.
    PLMap(std::vector<Dyadic> xs, std::vector<Dyadic> ys)
        : xs_(std::move(xs)), ys_(std::move(ys)) {
      derive_slopes();
    }

    [[nodiscard]] std::vector<Dyadic> const& breakpoints() const noexcept {
      return xs_;
    }
    [[nodiscard]] std::vector<Dyadic> const& values() const noexcept {
      return ys_;
    }
    // slope on piece k is 2^slope_exponents()[k]
    [[nodiscard]] std::vector<int> const& slope_exponents() const noexcept {
      return slopes_;
    }
    [[nodiscard]] std::size_t pieces() const noexcept {
      return slopes_.size();
    }
    [[nodiscard]] bool is_identity() const noexcept {
      return slopes_.size() == 1;
    }

    [[nodiscard]] Dyadic operator()(Dyadic const& t) const {
      if (t < Dyadic(0) || t > Dyadic(1)) {
        throw domain_error("argument outside [0,1]");
      }
      auto it = std::upper_bound(xs_.begin(), xs_.end(), t);
      std::size_t k
          = it == xs_.end() ? xs_.size() - 2 : static_cast<std::size_t>(it - xs_.begin()) - 1;
      return ys_[k] + (t - xs_[k]).scaled(slopes_[k]);
    }

    [[nodiscard]] PLMap inverse() const {
      PLMap out(raw_tag{});
      out.xs_     = ys_;
      out.ys_     = xs_;
      out.slopes_ = slopes_;
      for (auto& s : out.slopes_) {
        s = -s;
      }
      return out;
    }

    friend bool operator==(PLMap const& a, PLMap const& b) {
      return a.xs_ == b.xs_ && a.ys_ == b.ys_;
    }

    // f ∘ g: g acts first.
    friend PLMap compose(PLMap const& f, PLMap const& g);

    // Re-checks every class invariant; used by tests after each composition.
    [[nodiscard]] bool is_canonical() const {
      if (xs_.size() < 2 || xs_.size() != ys_.size() || slopes_.size() + 1 != xs_.size()) {
        return false;
      }
      if (xs_.front() != Dyadic(0) || ys_.front() != Dyadic(0) || xs_.back() != Dyadic(1)
          || ys_.back() != Dyadic(1)) {
        return false;
      }
      for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
        if (!(xs_[k] < xs_[k + 1]) || !(ys_[k] < ys_[k + 1])) {
          return false;
        }
        if ((xs_[k + 1] - xs_[k]).scaled(slopes_[k]) != ys_[k + 1] - ys_[k]) {
          return false;
        }
        if (k > 0 && slopes_[k] == slopes_[k - 1]) {
          return false;
        }
      }
      return true;
    }

   private:
    struct raw_tag {};
    explicit PLMap(raw_tag) {}

    void derive_slopes() {
      if (xs_.size() < 2 || xs_.size() != ys_.size()) {
        throw domain_error("PL map needs matching breakpoint and value lists of length >= 2");
      }
      slopes_.clear();
      for (std::size_t k = 0; k + 1 < xs_.size(); ++k) {
        Dyadic const dx = xs_[k + 1] - xs_[k];
        Dyadic const dy = ys_[k + 1] - ys_[k];
        if (dx.sign() <= 0 || dy.sign() <= 0) {
          throw domain_error("PL map must be strictly increasing");
        }
        // dy/dx = (ny/nx) * 2^(ex-ey); both numerators odd after normalization.
        if (dx.numerator() != dy.numerator()) {
          throw domain_error("PL map slope is not a power of two");
        }
        slopes_.push_back(static_cast<int>(dx.exponent()) - static_cast<int>(dy.exponent()));
      }
      if (!is_canonical()) {
        throw domain_error("PL map is not canonical");
      }
    }

    std::vector<Dyadic> xs_;
    std::vector<Dyadic> ys_;
    std::vector<int> slopes_;
  };

  inline PLMap compose(PLMap const& f, PLMap const& g) {
    PLMap out(PLMap::raw_tag{});
    std::size_t const max_points = f.xs_.size() + g.xs_.size();
    out.xs_.reserve(max_points);
    out.ys_.reserve(max_points);
    out.slopes_.reserve(max_points);
    out.xs_.emplace_back(0);
    out.ys_.emplace_back(0);

    // Sweep the pieces of g (in x) and of f (in g's image) together.
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t const ng = g.slopes_.size();
    std::size_t const nf = f.slopes_.size();
    auto push               = [&out](Dyadic x, Dyadic y, int slope) {
      if (!out.slopes_.empty() && out.slopes_.back() == slope) {
        out.xs_.back() = std::move(x);
        out.ys_.back() = std::move(y);
      } else {
        out.xs_.push_back(std::move(x));
        out.ys_.push_back(std::move(y));
        out.slopes_.push_back(slope);
      }
    };
    while (i < ng && j < nf) {
      int const slope = g.slopes_[i] + f.slopes_[j];
      auto const c    = g.ys_[i + 1] <=> f.xs_[j + 1];
      if (c < 0) {
        // g's breakpoint comes first; evaluate f on its piece j.
        Dyadic y = f.ys_[j] + (g.ys_[i + 1] - f.xs_[j]).scaled(f.slopes_[j]);
        push(g.xs_[i + 1], std::move(y), slope);
        ++i;
      } else if (c > 0) {
        // f's breakpoint pulled back through g's piece i.
        Dyadic x = g.xs_[i] + (f.xs_[j + 1] - g.ys_[i]).scaled(-g.slopes_[i]);
        push(std::move(x), f.ys_[j + 1], slope);
        ++j;
      } else {
        push(g.xs_[i + 1], f.ys_[j + 1], slope);
        ++i;
        ++j;
      }
    }
    return out;
  }

  // The map representing g_k. g_0 is the standard three-piece map with slopes
  // 1/2, 1, 2; g_k for k >= 1 is the identity on [0, 1 - 2^-k] and a copy of
  // g_0 rescaled onto [1 - 2^-k, 1].
  [[nodiscard]] inline PLMap generator_map(Natural k) {
    if (k > 0xFFFF'FFF0ULL) {
      throw overflow_error("generator index too large for dyadic exponent");
    }
    auto const e = static_cast<std::uint32_t>(k);
    if (k == 0) {
      return PLMap({Dyadic(0), Dyadic::pow2_inverse(1), Dyadic::one_minus(1, 2), Dyadic(1)},
                   {Dyadic(0), Dyadic::pow2_inverse(2), Dyadic::pow2_inverse(1), Dyadic(1)});
    }
    return PLMap({Dyadic(0), Dyadic::one_minus(1, e), Dyadic::one_minus(1, e + 1),
                  Dyadic::one_minus(1, e + 2), Dyadic(1)},
                 {Dyadic(0), Dyadic::one_minus(1, e), Dyadic::one_minus(3, e + 2),
                  Dyadic::one_minus(1, e + 1), Dyadic(1)});
  }

  [[nodiscard]] inline PLMap letter_map(Letter const& l) {
    PLMap m = generator_map(l.index);
    return l.sign == Sign::plus ? m : m.inverse();
  }

  // Products are read as composition with the rightmost letter acting first,
  // eval(l1 l2 ... ld) = m(l1) ∘ m(l2) ∘ ... ∘ m(ld). This is the order under
  // which g_n g_k = g_k g_{n+1} holds for the charts above; see
  // verify_relations.
  [[nodiscard]] inline PLMap product(PLMap const& left, PLMap const& right) {
    return compose(left, right);
  }

  [[nodiscard]] inline PLMap eval_word(Word const& w) {
    PLMap acc;
    for (auto const& l : w) {
      acc = product(acc, letter_map(l));
    }
    return acc;
  }

  [[nodiscard]] inline bool is_neutral(Word const& w) {
    return eval_word(w).is_identity();
  }

  ////////////////////////////////////////////////////////////////////////
  // canonical_key
  //
  // Layout, version 1:
  //   byte      0x01                     format version
  //   uint32    N, big-endian            number of breakpoints
  //   N times:  record(x_k) record(y_k)  in breakpoint order
  // record := sign byte (0x00 for >= 0, 0x01 for < 0)
  //           LEB128 varint of |numerator|
  //           LEB128 varint of exponent
  ////////////////////////////////////////////////////////////////////////

  inline constexpr std::uint8_t canonical_key_version = 1;

  namespace detail {
    inline void put_varint(std::string& out, std::uint64_t v) {
      while (v >= 0x80) {
        out.push_back(static_cast<char>((v & 0x7F) | 0x80));
        v >>= 7;
      }
      out.push_back(static_cast<char>(v));
    }

    inline void put_varint(std::string& out, BigInt v) {
      if (v <= std::numeric_limits<std::uint64_t>::max()) {
        put_varint(out, static_cast<std::uint64_t>(v));
        return;
      }
      while (v >= 0x80) {
        auto const low = static_cast<unsigned>(v & 0x7F);
        out.push_back(static_cast<char>(low | 0x80));
        v >>= 7;
      }
      out.push_back(static_cast<char>(static_cast<unsigned>(v)));
    }

    inline void put_record(std::string& out, Dyadic const& q) {
      out.push_back(q.sign() < 0 ? '\x01' : '\x00');
      put_varint(out, q.sign() < 0 ? BigInt(-q.numerator()) : q.numerator());
      put_varint(out, static_cast<std::uint64_t>(q.exponent()));
    }
  }  // namespace detail

  [[nodiscard]] inline std::string canonical_key(PLMap const& f) {
    std::string out;
    out.reserve(8 + f.breakpoints().size() * 12);
    out.push_back(static_cast<char>(canonical_key_version));
    auto const n = static_cast<std::uint32_t>(f.breakpoints().size());
    for (int shift = 24; shift >= 0; shift -= 8) {
      out.push_back(static_cast<char>((n >> shift) & 0xFF));
    }
    for (std::size_t k = 0; k < n; ++k) {
      detail::put_record(out, f.breakpoints()[k]);
      detail::put_record(out, f.values()[k]);
    }
    return out;
  }

  struct RelationCheck {
    Natural n;
    Natural k;
    bool holds;
  };

  struct RelationReport {
    Natural max_index = 0;
    std::vector<RelationCheck> checks;

    [[nodiscard]] bool all_pass() const noexcept {
      return std::all_of(checks.begin(), checks.end(), [](auto const& c) { return c.holds; });
    }
    [[nodiscard]] std::vector<RelationCheck> failures() const {
      std::vector<RelationCheck> out;
      std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
                   [](auto const& c) { return !c.holds; });
      return out;
    }
  };

  // Checks eval(g_n g_k) = eval(g_k g_{n+1}) for all 0 <= k < n <= max_index.
  [[nodiscard]] inline RelationReport verify_relations(Natural max_index) {
    RelationReport report;
    report.max_index = max_index;
    for (Natural n = 1; n <= max_index; ++n) {
      for (Natural k = 0; k < n; ++k) {
        bool const holds = eval_word(Word{gen(n), gen(k)}) == eval_word(Word{gen(k), gen(n + 1)});
        report.checks.push_back({n, k, holds});
      }
    }
    return report;
  }

}  // namespace thompson_clt
