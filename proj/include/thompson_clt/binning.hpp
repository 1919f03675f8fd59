#pragma once

// Permutations and pair partitions attached to words, and the two ways of
// rebuilding a neutral word from part of its data.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thompson_clt/errors.hpp"
#include "thompson_clt/frep.hpp"
#include "thompson_clt/rewrite.hpp"
#include "thompson_clt/word.hpp"

namespace thompson_clt {

  // A bijection of {1..d}, stored as its one-line image array.
  class Permutation {
   public:
    Permutation() = default;

    explicit Permutation(std::vector<std::uint32_t> images) : images_(std::move(images)) {
      std::vector<bool> seen(images_.size() + 1, false);
      for (auto v : images_) {
        if (v == 0 || v > images_.size() || seen[v]) {
          throw domain_error("image array is not a permutation of 1..d");
        }
        seen[v] = true;
      }
    }

    [[nodiscard]] static Permutation identity(std::size_t d) {
      std::vector<std::uint32_t> im(d);
      for (std::size_t k = 0; k < d; ++k) {
        im[k] = static_cast<std::uint32_t>(k + 1);
      }
      return Permutation(std::move(im));
    }

    // Parses cycle notation such as "(1,2,4,6)(3,8,7)"; "()" or "" is the
    // identity. Elements not mentioned are fixed.
    [[nodiscard]] static Permutation from_cycles(std::string_view text, std::size_t d);

    [[nodiscard]] std::size_t size() const noexcept {
      return images_.size();
    }
    [[nodiscard]] std::vector<std::uint32_t> const& images() const noexcept {
      return images_;
    }
    // 1-based application.
    [[nodiscard]] std::uint32_t operator()(std::uint32_t k) const {
      return images_.at(k - 1);
    }

    [[nodiscard]] Permutation inverse() const {
      std::vector<std::uint32_t> out(images_.size());
      for (std::size_t k = 0; k < images_.size(); ++k) {
        out[images_[k] - 1] = static_cast<std::uint32_t>(k + 1);
      }
      return Permutation(std::move(out));
    }

    [[nodiscard]] bool is_identity() const noexcept {
      for (std::size_t k = 0; k < images_.size(); ++k) {
        if (images_[k] != k + 1) {
          return false;
        }
      }
      return true;
    }

    // Each cycle starts at its smallest element, cycles ordered by that
    // element, fixed points omitted; the identity prints as "()".
    [[nodiscard]] std::string cycles() const {
      std::string out;
      std::vector<bool> done(images_.size() + 1, false);
      for (std::uint32_t s = 1; s <= images_.size(); ++s) {
        if (done[s] || images_[s - 1] == s) {
          continue;
        }
        out += '(';
        std::uint32_t k = s;
        bool first      = true;
        while (!done[k]) {
          done[k] = true;
          if (!first) {
            out += ',';
          }
          out += std::to_string(k);
          first = false;
          k     = images_[k - 1];
        }
        out += ')';
      }
      return out.empty() ? "()" : out;
    }

    // Packs up to 16 images into 4 bits each; used as a compact map key.
    [[nodiscard]] std::uint64_t packed() const {
      if (images_.size() > 16) {
        throw domain_error("packed permutation codes hold at most 16 points");
      }
      std::uint64_t code = 0;
      for (std::size_t k = 0; k < images_.size(); ++k) {
        code |= static_cast<std::uint64_t>(images_[k] - 1) << (4 * k);
      }
      return code;
    }
    [[nodiscard]] static Permutation unpack(std::uint64_t code, std::size_t d) {
      std::vector<std::uint32_t> im(d);
      for (std::size_t k = 0; k < d; ++k) {
        im[k] = static_cast<std::uint32_t>((code >> (4 * k)) & 0xF) + 1;
      }
      return Permutation(std::move(im));
    }

    friend bool operator==(Permutation const&, Permutation const&) = default;
    friend auto operator<=>(Permutation const&, Permutation const&) = default;

   private:
    std::vector<std::uint32_t> images_;
  };

  // a ∘ b, b applied first.
  [[nodiscard]] inline Permutation compose(Permutation const& a, Permutation const& b) {
    if (a.size() != b.size()) {
      throw domain_error("permutation sizes differ");
    }
    std::vector<std::uint32_t> out(a.size());
    for (std::uint32_t k = 1; k <= a.size(); ++k) {
      out[k - 1] = a(b(k));
    }
    return Permutation(std::move(out));
  }

  inline Permutation Permutation::from_cycles(std::string_view text, std::size_t d) {
    std::vector<std::uint32_t> im(d);
    for (std::size_t k = 0; k < d; ++k) {
      im[k] = static_cast<std::uint32_t>(k + 1);
    }
    std::vector<bool> used(d + 1, false);
    std::size_t pos = 0;
    auto skip       = [&] {
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) {
        ++pos;
      }
    };
    skip();
    while (pos < text.size()) {
      if (text[pos] != '(') {
        throw parse_error("expected '('", pos);
      }
      ++pos;
      std::vector<std::uint32_t> cyc;
      skip();
      while (pos < text.size() && text[pos] != ')') {
        Natural v = detail::parse_digits(text, pos);
        if (v == 0 || v > d || used[v]) {
          throw domain_error("cycle element " + std::to_string(v) + " is invalid or repeated");
        }
        used[v] = true;
        cyc.push_back(static_cast<std::uint32_t>(v));
        skip();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          skip();
        }
      }
      if (pos >= text.size()) {
        throw parse_error("unterminated cycle", pos);
      }
      ++pos;
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        im[cyc[k] - 1] = cyc[(k + 1) % cyc.size()];
      }
      skip();
    }
    return Permutation(std::move(im));
  }

  using Block = std::pair<std::uint32_t, std::uint32_t>;

  // Pairs covering {1..d}; kept as a sorted list of sorted pairs.
  class PairPartition {
   public:
    PairPartition() = default;

    explicit PairPartition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
      for (auto& b : blocks_) {
        if (b.first > b.second) {
          std::swap(b.first, b.second);
        }
      }
      std::sort(blocks_.begin(), blocks_.end());
      std::size_t const d = 2 * blocks_.size();
      std::vector<bool> seen(d + 1, false);
      for (auto const& [a, b] : blocks_) {
        for (auto v : {a, b}) {
          if (v == 0 || v > d || seen[v]) {
            throw domain_error("blocks do not partition 1..d into pairs");
          }
          seen[v] = true;
        }
      }
    }

    [[nodiscard]] std::size_t size() const noexcept {
      return 2 * blocks_.size();
    }
    [[nodiscard]] std::vector<Block> const& blocks() const noexcept {
      return blocks_;
    }
    [[nodiscard]] std::uint32_t partner(std::uint32_t k) const {
      for (auto const& [a, b] : blocks_) {
        if (a == k) {
          return b;
        }
        if (b == k) {
          return a;
        }
      }
      throw domain_error("point " + std::to_string(k) + " is not covered by the partition");
    }

    // [[1,8],[2,5],[3,6],[4,7]]
    [[nodiscard]] std::string to_string() const {
      std::string out = "[";
      for (std::size_t k = 0; k < blocks_.size(); ++k) {
        if (k != 0) {
          out += ',';
        }
        out += '[' + std::to_string(blocks_[k].first) + ',' + std::to_string(blocks_[k].second) + ']';
      }
      return out + ']';
    }

    friend bool operator==(PairPartition const&, PairPartition const&) = default;
    friend auto operator<=>(PairPartition const&, PairPartition const&) = default;

   private:
    std::vector<Block> blocks_;
  };

  [[nodiscard]] inline PairPartition rainbow(std::size_t d) {
    if (d == 0 || d % 2 != 0) {
      throw domain_error("the rainbow partition needs a positive even d");
    }
    std::vector<Block> blocks;
    for (std::size_t k = 1; k <= d / 2; ++k) {
      blocks.emplace_back(static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(d - k + 1));
    }
    return PairPartition(std::move(blocks));
  }

  [[nodiscard]] inline PairPartition apply_to_partition(Permutation const& t, PairPartition const& p) {
    if (t.size() != p.size()) {
      throw domain_error("permutation and partition sizes differ");
    }
    std::vector<Block> out;
    out.reserve(p.blocks().size());
    for (auto const& [a, b] : p.blocks()) {
      out.emplace_back(t(a), t(b));
    }
    return PairPartition(std::move(out));
  }

  // τ(l) is the final position of the letter that started at position l.
  [[nodiscard]] inline Permutation tau_of_normalized(TaggedWord const& normalized) {
    std::vector<std::uint32_t> im(normalized.size());
    for (std::size_t k = 0; k < normalized.size(); ++k) {
      im[normalized[k].origin - 1] = static_cast<std::uint32_t>(k + 1);
    }
    return Permutation(std::move(im));
  }

  [[nodiscard]] inline Permutation tau_of(Word const& w) {
    TaggedWord t = tag(w);
    normalize_in_place(t);
    return tau_of_normalized(t);
  }

  // τ^-1 of the rainbow, with no neutrality check.
  [[nodiscard]] inline PairPartition partition_from_tau(Permutation const& t) {
    return apply_to_partition(t.inverse(), rainbow(t.size()));
  }

  [[nodiscard]] inline PairPartition partition_of(Word const& w) {
    if (w.size() % 2 != 0) {
      throw domain_error("a word of odd length has no pair partition");
    }
    if (w.empty()) {
      throw domain_error("the empty word has no pair partition");
    }
    if (!is_neutral(w)) {
      throw not_neutral("word is not neutral under the PL-map oracle");
    }
    return partition_from_tau(tau_of(w));
  }

  // Sign pattern fully known, some indices unknown.
  struct PartialWord {
    std::vector<Sign> signs;
    std::vector<std::optional<Natural>> indices;

    [[nodiscard]] std::size_t size() const noexcept {
      return signs.size();
    }
  };

  // Erases the indices of all inverse letters.
  [[nodiscard]] inline PartialWord erase_inverse_indices(Word const& w) {
    PartialWord p;
    for (auto const& l : w) {
      p.signs.push_back(l.sign);
      p.indices.push_back(l.sign == Sign::plus ? std::optional<Natural>(l.index) : std::nullopt);
    }
    return p;
  }

  namespace detail {
    using SymLetter = BasicTaggedLetter<SymbolicIndex>;
    using SymWord   = BasicTaggedWord<SymbolicIndex>;

    inline void resolve(SymWord& w, std::uint32_t variable, std::int64_t value) {
      for (auto& t : w) {
        if (t.letter.index.variable == variable) {
          t.letter.index.variable.reset();
          t.letter.index.offset += value;
        }
      }
    }
  }  // namespace detail

  // Rebuilds the inverse-letter indices of a neutral word from its generator
  // indices and its pair partition by peeling off letters of the smallest
  // index. Known inverse indices, if any, are only checked against the result.
  [[nodiscard]] inline Word complete_from_partition(PartialWord const& p, PairPartition const& pi) {
    std::size_t const d = p.size();
    if (p.indices.size() != d) {
      throw domain_error("sign and index lists differ in length");
    }
    if (pi.size() != d) {
      throw domain_error("partition size differs from word length");
    }
    for (auto const& [a, b] : pi.blocks()) {
      if (p.signs[a - 1] == p.signs[b - 1]) {
        throw inconsistent_data("block {" + std::to_string(a) + "," + std::to_string(b)
                                + "} does not pair a generator with an inverse");
      }
      std::uint32_t const plus = p.signs[a - 1] == Sign::plus ? a : b;
      if (!p.indices[plus - 1]) {
        throw domain_error("generator index at position " + std::to_string(plus) + " is unknown");
      }
    }

    detail::SymWord core;
    for (std::size_t k = 0; k < d; ++k) {
      SymbolicIndex idx;
      if (p.signs[k] == Sign::plus) {
        idx.offset = static_cast<std::int64_t>(*p.indices[k]);
      } else {
        idx.variable = static_cast<std::uint32_t>(k + 1);
      }
      core.push_back({{idx, p.signs[k]}, static_cast<std::uint32_t>(k + 1)});
    }

    std::vector<std::optional<std::int64_t>> solved(d + 1);
    while (!core.empty()) {
      std::optional<std::int64_t> lo;
      for (auto const& t : core) {
        if (t.letter.index.is_known() && (!lo || t.letter.index.offset < *lo)) {
          lo = t.letter.index.offset;
        }
      }
      if (!lo) {
        throw inconsistent_data("no known index left to peel");
      }
      std::int64_t const i0 = *lo;

      // Partners of minimal generators are minimal too.
      for (auto const& t : detail::SymWord(core)) {
        if (t.letter.sign != Sign::plus || t.letter.index.offset != i0
            || !t.letter.index.is_known()) {
          continue;
        }
        std::uint32_t const mate = pi.partner(t.origin);
        auto it = std::find_if(core.begin(), core.end(),
                               [mate](auto const& u) { return u.origin == mate; });
        if (it == core.end()) {
          throw inconsistent_data("partner of position " + std::to_string(t.origin)
                                  + " was already peeled");
        }
        if (it->letter.index.is_known()) {
          if (it->letter.index.offset != i0) {
            throw inconsistent_data("inverse paired with a minimal generator is not minimal");
          }
          continue;
        }
        std::int64_t const value = i0 - it->letter.index.offset;
        if (value < 0) {
          throw inconsistent_data("derived a negative index for position " + std::to_string(mate));
        }
        solved[mate] = value;
        detail::resolve(core, mate, value);
      }

      rewrite_to_fixed_point<SymbolicIndex>(core, ReductionKind::push_smallest,
                                            static_cast<Natural>(i0), step_budget(core.size()));

      auto is_min = [i0](detail::SymLetter const& t, Sign s) {
        return t.letter.sign == s && t.letter.index.is_known() && t.letter.index.offset == i0;
      };
      std::size_t left = 0;
      while (left < core.size() && is_min(core[left], Sign::plus)) {
        ++left;
      }
      std::size_t right = 0;
      while (right < core.size() - left && is_min(core[core.size() - 1 - right], Sign::minus)) {
        ++right;
      }
      if (left == 0 || left != right) {
        throw inconsistent_data("minimal letters do not peel off in balanced pairs");
      }
      for (std::size_t k = left; k + right < core.size(); ++k) {
        if (core[k].letter.index.is_known() && core[k].letter.index.offset == i0) {
          throw inconsistent_data("a minimal letter is trapped inside the word");
        }
      }
      for (std::size_t k = 0; k < left; ++k) {
        std::uint32_t const mate = pi.partner(core[k].origin);
        bool const peeled        = std::any_of(core.end() - static_cast<std::ptrdiff_t>(right),
                                               core.end(), [mate](auto const& u) { return u.origin == mate; });
        if (!peeled) {
          throw inconsistent_data("peeled letters are not paired by the partition");
        }
      }
      core = detail::SymWord(core.begin() + static_cast<std::ptrdiff_t>(left),
                             core.end() - static_cast<std::ptrdiff_t>(right));
    }

    std::vector<Letter> letters(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (p.signs[k] == Sign::plus) {
        letters[k] = {*p.indices[k], Sign::plus};
        continue;
      }
      if (!solved[k + 1]) {
        throw internal_error("inverse index at position " + std::to_string(k + 1) + " was never solved");
      }
      auto const v = static_cast<Natural>(*solved[k + 1]);
      if (p.indices[k] && *p.indices[k] != v) {
        throw inconsistent_data("known inverse index at position " + std::to_string(k + 1)
                                + " disagrees with the completion");
      }
      letters[k] = {v, Sign::minus};
    }
    Word out(std::move(letters));
    if (!is_neutral(out)) {
      throw inconsistent_data("completed word is not neutral under the PL-map oracle");
    }
    if (partition_of(out) != pi) {
      throw inconsistent_data("completed word has a different pair partition");
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Completion from a permutation with widely spaced generator indices
  ////////////////////////////////////////////////////////////////////////

  // A letter's index written as X_rank + offset. Generators of rank l have
  // X_l = i(τ^-1(l)), and these are so far apart that every comparison is
  // decided by the ranks alone: a lower rank is a larger index. An inverse of
  // rank l pairs with the generator of rank l and is compared as equal to it.
  struct RankedIndex {
    std::uint32_t rank   = 0;
    std::int64_t offset  = 0;
    friend bool operator==(RankedIndex const&, RankedIndex const&) = default;
  };

  template <>
  struct IndexAlgebra<RankedIndex> {
    static std::strong_ordering compare(RankedIndex const& a, RankedIndex const& b) noexcept {
      return b.rank <=> a.rank;
    }
    static bool exceeds_by_two(RankedIndex const& a, RankedIndex const& b) noexcept {
      return a.rank < b.rank;
    }
    static std::strong_ordering compare_to_min(RankedIndex const&, Natural) {
      throw domain_error("push_smallest does not run on ranked indices");
    }
    static RankedIndex succ(RankedIndex a) noexcept {
      ++a.offset;
      return a;
    }
    static RankedIndex pred(RankedIndex a) noexcept {
      --a.offset;
      return a;
    }
  };

  // Signs forced by τ: position τ^-1(l) is a generator iff l <= d/2.
  [[nodiscard]] inline std::vector<Sign> spaced_signs(Permutation const& t) {
    std::size_t const d = t.size();
    std::vector<Sign> signs(d);
    for (std::uint32_t p = 1; p <= d; ++p) {
      signs[p - 1] = t(p) <= d / 2 ? Sign::plus : Sign::minus;
    }
    return signs;
  }

  // The neutral word with permutation t whose generators sit at the given
  // positions τ^-1(1..d/2) with the given indices.
  [[nodiscard]] inline Word complete_from_spaced(Permutation const& t,
                                                 std::map<std::uint32_t, Natural> const& generators) {
    std::size_t const d = t.size();
    if (d == 0 || d % 2 != 0) {
      throw domain_error("spaced completion needs a positive even length");
    }
    std::size_t const half = d / 2;
    Permutation const tinv = t.inverse();
    if (generators.size() != half) {
      throw domain_error("expected exactly " + std::to_string(half) + " generator indices");
    }
    std::vector<std::int64_t> K(half + 1);
    for (std::uint32_t l = 1; l <= half; ++l) {
      auto it = generators.find(tinv(l));
      if (it == generators.end()) {
        throw domain_error("no index given for generator position " + std::to_string(tinv(l)));
      }
      if (it->second > static_cast<Natural>(std::numeric_limits<std::int64_t>::max() / 2)) {
        throw overflow_error("generator index too large for spaced completion");
      }
      K[l] = static_cast<std::int64_t>(it->second);
    }
    auto const span = static_cast<std::int64_t>(3 * d);
    for (std::uint32_t l = 2; l <= half; ++l) {
      if (!(K[l] < K[l - 1] - span)) {
        throw domain_error("spacing violated: i(" + std::to_string(tinv(l)) + ") = "
                           + std::to_string(K[l]) + " is not below i(" + std::to_string(tinv(l - 1))
                           + ") - 3d = " + std::to_string(K[l - 1] - span));
      }
    }

    BasicTaggedWord<RankedIndex> w;
    for (std::uint32_t p = 1; p <= d; ++p) {
      std::uint32_t const img = t(p);
      bool const gen_letter   = img <= half;
      auto const rank         = static_cast<std::uint32_t>(gen_letter ? img : d - img + 1);
      w.push_back({{RankedIndex{rank, 0}, gen_letter ? Sign::plus : Sign::minus}, p});
    }
    normalize_in_place<RankedIndex>(w);

    auto const bound = static_cast<std::int64_t>(half);
    std::vector<Letter> letters(d);
    for (std::uint32_t l = 1; l <= half; ++l) {
      auto const& g  = w[l - 1];
      auto const& gi = w[d - l];
      if (g.letter.sign != Sign::plus || g.letter.index.rank != l || gi.letter.sign != Sign::minus
          || gi.letter.index.rank != l) {
        throw internal_error("symbolic normal form does not have the mirrored shape");
      }
      std::int64_t const q = g.letter.index.offset;
      std::int64_t const r = gi.letter.index.offset;
      if (q < -bound || q > bound || r < -bound || r > bound) {
        throw internal_error("offset left the range [-d/2, d/2]");
      }
      std::int64_t const x = K[l] + q - r;
      if (x < K[l] - static_cast<std::int64_t>(d) || x > K[l] + static_cast<std::int64_t>(d)) {
        throw internal_error("solved inverse index is more than d away from its generator");
      }
      if (x < 0) {
        throw inconsistent_data("solved inverse index is negative");
      }
      letters[g.origin - 1]  = {static_cast<Natural>(K[l]), Sign::plus};
      letters[gi.origin - 1] = {static_cast<Natural>(x), Sign::minus};
    }
    Word out(std::move(letters));
    if (!is_neutral(out)) {
      throw internal_error("spaced completion is not neutral under the PL-map oracle");
    }
    if (tau_of(out) != t) {
      throw internal_error("spaced completion has a different permutation");
    }
    return out;
  }

}  // namespace thompson_clt
