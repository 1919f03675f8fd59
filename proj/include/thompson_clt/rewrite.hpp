#pragma once

// Length-preserving rewriting of words in F.
//
//   separate      (g_a^-1, g_b) -> generators left, inverses right
//   order         sorts the generator block down and the inverse block up
//   push_smallest moves letters of the word's minimum index outwards
//   composed      separate to a fixed point, then order to a fixed point
//
// Every rule swaps the two letters of a length-2 sub-word and changes the
// index of at most one of them by one. Letters carry the 1-based position they
// had in the input word (their origin), which the binning code turns into a
// permutation.
//
// Positions in this API are 1-based: position k names the sub-word made of
// letters k and k+1.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "thompson_clt/errors.hpp"
#include "thompson_clt/word.hpp"

namespace thompson_clt {

  enum class ReductionKind { separate, order, push_smallest, composed };

  [[nodiscard]] inline std::string to_string(ReductionKind k) {
    switch (k) {
      case ReductionKind::separate:
        return "separate";
      case ReductionKind::order:
        return "order";
      case ReductionKind::push_smallest:
        return "push-smallest";
      case ReductionKind::composed:
        return "composed";
    }
    return "?";
  }

  [[nodiscard]] inline ReductionKind parse_reduction_kind(std::string_view s) {
    if (s == "separate") {
      return ReductionKind::separate;
    }
    if (s == "order") {
      return ReductionKind::order;
    }
    if (s == "push-smallest" || s == "push_smallest") {
      return ReductionKind::push_smallest;
    }
    if (s == "composed") {
      return ReductionKind::composed;
    }
    throw domain_error("unknown reduction kind '" + std::string(s) + "'");
  }

  ////////////////////////////////////////////////////////////////////////
  // Index algebras
  ////////////////////////////////////////////////////////////////////////

  // What the rules need to know about indices. Specialise for symbolic index
  // types; the rules themselves never look inside an index.
  template <class Index>
  struct IndexAlgebra;

  template <>
  struct IndexAlgebra<Natural> {
    static std::strong_ordering compare(Natural a, Natural b) noexcept {
      return a <=> b;
    }
    // a - 1 > b
    static bool exceeds_by_two(Natural a, Natural b) noexcept {
      return a > b && a - b > 1;
    }
    static std::strong_ordering compare_to_min(Natural a, Natural minimum) {
      if (a < minimum) {
        throw domain_error("letter index below the stated minimum");
      }
      return a <=> minimum;
    }
    static Natural succ(Natural a) {
      return checked_increment(a);
    }
    static Natural pred(Natural a) {
      return checked_decrement(a);
    }
  };

  // An index that is either a concrete natural or an unknown plus a known
  // offset. Only push_smallest can run on these: an unknown is always taken
  // to lie strictly above the current minimum, which is what the completion
  // algorithm establishes before each push.
  struct SymbolicIndex {
    std::optional<std::uint32_t> variable;  // origin of the unknown letter
    std::int64_t offset = 0;                // the value itself when concrete

    [[nodiscard]] bool is_known() const noexcept {
      return !variable.has_value();
    }
    friend bool operator==(SymbolicIndex const&, SymbolicIndex const&) = default;
  };

  template <>
  struct IndexAlgebra<SymbolicIndex> {
    static std::strong_ordering compare_to_min(SymbolicIndex const& a, Natural minimum) {
      if (!a.is_known()) {
        return std::strong_ordering::greater;
      }
      if (a.offset < static_cast<std::int64_t>(minimum)) {
        throw inconsistent_data("known index below the current minimum");
      }
      return a.offset <=> static_cast<std::int64_t>(minimum);
    }
    static std::strong_ordering compare(SymbolicIndex const& a, SymbolicIndex const& b) {
      if (!a.is_known() || !b.is_known()) {
        throw domain_error("comparison of unknown indices is undetermined");
      }
      return a.offset <=> b.offset;
    }
    static bool exceeds_by_two(SymbolicIndex const& a, SymbolicIndex const& b) {
      return compare(a, b) > 0 && a.offset - b.offset > 1;
    }
    static SymbolicIndex succ(SymbolicIndex a) noexcept {
      ++a.offset;
      return a;
    }
    static SymbolicIndex pred(SymbolicIndex a) noexcept {
      --a.offset;
      return a;
    }
  };

  ////////////////////////////////////////////////////////////////////////
  // The rules
  ////////////////////////////////////////////////////////////////////////

  template <class Index>
  using LetterPair = std::array<BasicLetter<Index>, 2>;

  // (g_a^-1, g_b) -> (g_b, g_a^-1)      a = b
  //               -> (g_b, g_{a+1}^-1)  a > b
  //               -> (g_{b+1}, g_a^-1)  b > a
  template <class Index, class Alg = IndexAlgebra<Index>>
  [[nodiscard]] std::optional<LetterPair<Index>> separate_rule(BasicLetter<Index> const& a,
                                                               BasicLetter<Index> const& b) {
    if (a.sign != Sign::minus || b.sign != Sign::plus) {
      return std::nullopt;
    }
    auto const c = Alg::compare(a.index, b.index);
    if (c == 0) {
      return LetterPair<Index>{b, a};
    }
    if (c > 0) {
      return LetterPair<Index>{b, {Alg::succ(a.index), Sign::minus}};
    }
    return LetterPair<Index>{BasicLetter<Index>{Alg::succ(b.index), Sign::plus}, a};
  }

  // (g_a, g_b)       -> (g_{b-1}, g_a)        b - 1 > a
  // (g_a^-1, g_b^-1) -> (g_b^-1, g_{a-1}^-1)  a - 1 > b
  template <class Index, class Alg = IndexAlgebra<Index>>
  [[nodiscard]] std::optional<LetterPair<Index>> order_rule(BasicLetter<Index> const& a,
                                                            BasicLetter<Index> const& b) {
    if (a.sign != b.sign) {
      return std::nullopt;
    }
    if (a.sign == Sign::plus) {
      if (!Alg::exceeds_by_two(b.index, a.index)) {
        return std::nullopt;
      }
      return LetterPair<Index>{BasicLetter<Index>{Alg::pred(b.index), Sign::plus}, a};
    }
    if (!Alg::exceeds_by_two(a.index, b.index)) {
      return std::nullopt;
    }
    return LetterPair<Index>{b, {Alg::pred(a.index), Sign::minus}};
  }

  // With i0 the minimum index of the word and m > i0:
  // (g_m^e, g_i0)    -> (g_i0, g_{m+1}^e)
  // (g_i0^-1, g_m^e) -> (g_{m+1}^e, g_i0^-1)
  // (g_i0^-1, g_i0)  -> (g_i0, g_i0^-1)
  template <class Index, class Alg = IndexAlgebra<Index>>
  [[nodiscard]] std::optional<LetterPair<Index>> push_smallest_rule(BasicLetter<Index> const& a,
                                                                    BasicLetter<Index> const& b,
                                                                    Natural minimum) {
    bool const a_min = Alg::compare_to_min(a.index, minimum) == 0;
    bool const b_min = Alg::compare_to_min(b.index, minimum) == 0;
    if (b.sign == Sign::plus && b_min && !a_min) {
      return LetterPair<Index>{b, {Alg::succ(a.index), a.sign}};
    }
    if (a.sign == Sign::minus && a_min && !b_min) {
      return LetterPair<Index>{BasicLetter<Index>{Alg::succ(b.index), b.sign}, a};
    }
    if (a.sign == Sign::minus && a_min && b.sign == Sign::plus && b_min) {
      return LetterPair<Index>{b, a};
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Tagged words and traces
  ////////////////////////////////////////////////////////////////////////

  template <class Index>
  struct BasicTaggedLetter {
    BasicLetter<Index> letter;
    std::uint32_t origin = 0;  // 1-based position in the input word

    friend bool operator==(BasicTaggedLetter const&, BasicTaggedLetter const&) = default;
  };

  using TaggedLetter = BasicTaggedLetter<Natural>;

  [[nodiscard]] inline std::strong_ordering operator<=>(TaggedLetter const& a,
                                                        TaggedLetter const& b) noexcept {
    if (auto c = a.letter <=> b.letter; c != 0) {
      return c;
    }
    return a.origin <=> b.origin;
  }

  template <class Index>
  using BasicTaggedWord = std::vector<BasicTaggedLetter<Index>>;

  using TaggedWord = BasicTaggedWord<Natural>;

  [[nodiscard]] inline TaggedWord tag(Word const& w) {
    TaggedWord out;
    out.reserve(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      out.push_back({w[k], static_cast<std::uint32_t>(k + 1)});
    }
    return out;
  }

  [[nodiscard]] inline Word strip(TaggedWord const& w) {
    std::vector<Letter> out;
    out.reserve(w.size());
    for (auto const& t : w) {
      out.push_back(t.letter);
    }
    return Word(std::move(out));
  }

  template <class Index>
  struct BasicStep {
    ReductionKind kind;
    std::size_t position;  // 1-based
    std::array<BasicTaggedLetter<Index>, 2> before;
    std::array<BasicTaggedLetter<Index>, 2> after;
  };

  template <class Index>
  using BasicStepTrace = std::vector<BasicStep<Index>>;

  using Step      = BasicStep<Natural>;
  using StepTrace = BasicStepTrace<Natural>;

  namespace detail {
    template <class Index, class Alg = IndexAlgebra<Index>>
    std::optional<std::array<BasicTaggedLetter<Index>, 2>> apply_rule(
        ReductionKind kind,
        BasicTaggedLetter<Index> const& a,
        BasicTaggedLetter<Index> const& b,
        Natural minimum) {
      std::optional<LetterPair<Index>> r;
      switch (kind) {
        case ReductionKind::separate:
          r = separate_rule<Index, Alg>(a.letter, b.letter);
          break;
        case ReductionKind::order:
          r = order_rule<Index, Alg>(a.letter, b.letter);
          break;
        case ReductionKind::push_smallest:
          r = push_smallest_rule<Index, Alg>(a.letter, b.letter, minimum);
          break;
        case ReductionKind::composed:
          throw domain_error("the composed reduction has no single-step rule");
      }
      if (!r) {
        return std::nullopt;
      }
      // Every rule interchanges the two letters.
      return std::array<BasicTaggedLetter<Index>, 2>{
          BasicTaggedLetter<Index>{(*r)[0], b.origin}, BasicTaggedLetter<Index>{(*r)[1], a.origin}};
    }

    inline Natural minimum_index(TaggedWord const& w) {
      Natural m = std::numeric_limits<Natural>::max();
      for (auto const& t : w) {
        m = std::min(m, t.letter.index);
      }
      return m;
    }
  }  // namespace detail

  enum class Strategy { leftmost, rightmost };

  // Contracts redexes of one kind until none is left. `minimum` is only read
  // by push_smallest. Returns the number of steps taken; throws internal_error
  // once `budget` steps have not sufficed.
  template <class Index, class Alg = IndexAlgebra<Index>>
  std::size_t rewrite_to_fixed_point(BasicTaggedWord<Index>& w,
                                     ReductionKind kind,
                                     Natural minimum,
                                     std::size_t budget,
                                     BasicStepTrace<Index>* trace = nullptr,
                                     Strategy strategy    = Strategy::leftmost) {
    std::size_t steps = 0;
    if (w.size() < 2) {
      return 0;
    }
    std::size_t const last = w.size() - 2;  // last 0-based pair start
    std::size_t k          = 0;
    while (true) {
      std::optional<std::array<BasicTaggedLetter<Index>, 2>> r;
      if (strategy == Strategy::leftmost) {
        // Pairs left of k-1 are untouched by the previous step, so the scan
        // resumes just before it.
        for (; k <= last; ++k) {
          r = detail::apply_rule<Index, Alg>(kind, w[k], w[k + 1], minimum);
          if (r) {
            break;
          }
        }
        if (!r) {
          return steps;
        }
      } else {
        bool found = false;
        for (std::size_t j = last + 1; j-- > 0;) {
          r = detail::apply_rule<Index, Alg>(kind, w[j], w[j + 1], minimum);
          if (r) {
            k     = j;
            found = true;
            break;
          }
        }
        if (!found) {
          return steps;
        }
      }
      if (steps == budget) {
        throw internal_error("rewriting exceeded its step budget of " + std::to_string(budget));
      }
      if (trace != nullptr) {
        trace->push_back({kind, k + 1, {w[k], w[k + 1]}, *r});
      }
      w[k]     = (*r)[0];
      w[k + 1] = (*r)[1];
      ++steps;
      if (strategy == Strategy::leftmost) {
        k = k == 0 ? 0 : k - 1;
      }
    }
  }

  // Step budget for a word of length d.
  [[nodiscard]] constexpr std::size_t step_budget(std::size_t d) noexcept {
    return 3 * d * d;
  }

  // All reductions, separate phase then order phase, in place.
  template <class Index, class Alg = IndexAlgebra<Index>>
  std::size_t normalize_in_place(BasicTaggedWord<Index>& w,
                                 BasicStepTrace<Index>* trace = nullptr,
                                 Strategy strategy            = Strategy::leftmost) {
    std::size_t const budget = step_budget(w.size());
    std::size_t const s1
        = rewrite_to_fixed_point<Index, Alg>(w, ReductionKind::separate, 0, budget, trace, strategy);
    std::size_t const s2 = rewrite_to_fixed_point<Index, Alg>(
        w, ReductionKind::order, 0, budget - s1, trace, strategy);
    return s1 + s2;
  }

  ////////////////////////////////////////////////////////////////////////
  // Concrete API
  ////////////////////////////////////////////////////////////////////////

  // 1-based positions k at which the sub-word (k, k+1) is a redex of `kind`.
  // For push_smallest the minimum is that of `w`.
  [[nodiscard]] inline std::vector<std::size_t> redexes(TaggedWord const& w, ReductionKind kind) {
    if (kind == ReductionKind::composed) {
      throw domain_error("redexes are defined for single reductions only");
    }
    std::vector<std::size_t> out;
    if (w.size() < 2) {
      return out;
    }
    Natural const minimum = detail::minimum_index(w);
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      if (detail::apply_rule(kind, w[k], w[k + 1], minimum)) {
        out.push_back(k + 1);
      }
    }
    return out;
  }

  [[nodiscard]] inline std::vector<std::size_t> redexes(Word const& w, ReductionKind kind) {
    return redexes(tag(w), kind);
  }

  [[nodiscard]] inline TaggedWord step(TaggedWord w, ReductionKind kind, std::size_t position) {
    if (kind == ReductionKind::composed) {
      throw domain_error("the composed reduction has no single-step rule");
    }
    if (position == 0 || position >= w.size()) {
      throw not_a_redex("position " + std::to_string(position) + " is out of range");
    }
    Natural const minimum = detail::minimum_index(w);
    auto r = detail::apply_rule(kind, w[position - 1], w[position], minimum);
    if (!r) {
      throw not_a_redex("no " + to_string(kind) + " redex at position " + std::to_string(position));
    }
    w[position - 1] = (*r)[0];
    w[position]     = (*r)[1];
    return w;
  }

  struct Normalization {
    TaggedWord word;
    StepTrace trace;
  };

  [[nodiscard]] inline Normalization normalize(Word const& w, Strategy strategy = Strategy::leftmost) {
    Normalization out{tag(w), {}};
    normalize_in_place(out.word, &out.trace, strategy);
    return out;
  }

  [[nodiscard]] inline Word normal_form(Word const& w) {
    TaggedWord t = tag(w);
    normalize_in_place(t);
    return strip(t);
  }

  // Re-applies a trace to the tagged input word.
  [[nodiscard]] inline TaggedWord replay(Word const& w, StepTrace const& trace) {
    TaggedWord t = tag(w);
    for (auto const& s : trace) {
      if (s.position == 0 || s.position >= t.size() || t[s.position - 1] != s.before[0]
          || t[s.position] != s.before[1]) {
        throw internal_error("trace does not match the word it is replayed on");
      }
      t = step(std::move(t), s.kind, s.position);
      if (t[s.position - 1] != s.after[0] || t[s.position] != s.after[1]) {
        throw internal_error("trace step produced a different result on replay");
      }
    }
    return t;
  }

  // Generators first, then inverses; j(k) + 1 >= j(k+1) among generators and
  // j(k) <= j(k+1) + 1 among inverses.
  [[nodiscard]] inline bool is_normal_form(Word const& w) {
    std::size_t r = 0;
    while (r < w.size() && w[r].sign == Sign::plus) {
      ++r;
    }
    for (std::size_t k = r; k < w.size(); ++k) {
      if (w[k].sign != Sign::minus) {
        return false;
      }
    }
    for (std::size_t k = 0; k + 1 < r; ++k) {
      if (w[k].index + 1 < w[k + 1].index) {
        return false;
      }
    }
    for (std::size_t k = r; k + 1 < w.size(); ++k) {
      if (w[k].index > w[k + 1].index + 1) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Empirical checks
  ////////////////////////////////////////////////////////////////////////

  // Calls f(word) for every word of length 0..max_len over indices 0..max_index,
  // shorter words first, lexicographically within a length.
  template <class F>
  void for_each_word(std::size_t max_len, Natural max_index, F&& f) {
    Natural const alphabet = 2 * (max_index + 1);
    for (std::size_t len = 0; len <= max_len; ++len) {
      std::vector<Natural> code(len, 0);
      while (true) {
        std::vector<Letter> letters(len);
        for (std::size_t k = 0; k < len; ++k) {
          letters[k] = {code[k] / 2, code[k] % 2 == 0 ? Sign::minus : Sign::plus};
        }
        f(Word(std::move(letters)));
        std::size_t k = len;
        while (k > 0 && ++code[k - 1] == alphabet) {
          code[k - 1] = 0;
          --k;
        }
        if (k == 0) {
          break;
        }
      }
    }
  }

  namespace detail {
    inline std::vector<Word> one_step_successors(Word const& w, ReductionKind kind) {
      std::vector<Word> out;
      TaggedWord const t = tag(w);
      for (auto k : redexes(t, kind)) {
        out.push_back(strip(step(t, kind, k)));
      }
      return out;
    }

    // Every word reachable from `w`, capped.
    inline std::set<Word> reachable(Word const& w, ReductionKind kind, std::size_t cap, bool& capped) {
      std::set<Word> seen{w};
      std::vector<Word> frontier{w};
      while (!frontier.empty()) {
        Word cur = std::move(frontier.back());
        frontier.pop_back();
        for (auto& nxt : one_step_successors(cur, kind)) {
          if (seen.size() >= cap) {
            capped = true;
            return seen;
          }
          if (seen.insert(nxt).second) {
            frontier.push_back(std::move(nxt));
          }
        }
      }
      return seen;
    }
  }  // namespace detail

  struct ConfluenceCounterexample {
    Word word;
    std::size_t first_position;
    std::size_t second_position;
    Word first;
    Word second;
  };

  struct ConfluenceReport {
    ReductionKind kind;
    std::size_t max_len;
    Natural max_index;
    std::size_t reachable_cap;
    std::size_t words_checked     = 0;
    std::size_t peaks_checked     = 0;  // pairs of distinct one-step successors
    std::size_t overlapping_peaks = 0;  // peaks whose redexes share a letter
    bool cap_hit                  = false;
    std::vector<ConfluenceCounterexample> counterexamples{};
  };

  // Local confluence over every word of length <= max_len with indices <=
  // max_index. The order reduction is checked on its own domain, words that
  // are irreducible for separate.
  [[nodiscard]] inline ConfluenceReport check_local_confluence(ReductionKind kind,
                                                               std::size_t max_len,
                                                               Natural max_index,
                                                               std::size_t reachable_cap = 1'000'000) {
    if (kind == ReductionKind::composed) {
      throw domain_error("local confluence is checked for single reductions only");
    }
    ConfluenceReport report{kind, max_len, max_index, reachable_cap};
    for_each_word(max_len, max_index, [&](Word const& w) {
      if (kind == ReductionKind::order && !redexes(w, ReductionKind::separate).empty()) {
        return;
      }
      ++report.words_checked;
      TaggedWord const t = tag(w);
      auto const pos     = redexes(t, kind);
      for (std::size_t a = 0; a < pos.size(); ++a) {
        for (std::size_t b = a + 1; b < pos.size(); ++b) {
          ++report.peaks_checked;
          if (pos[b] == pos[a] + 1) {
            ++report.overlapping_peaks;
          }
          Word const x = strip(step(t, kind, pos[a]));
          Word const y = strip(step(t, kind, pos[b]));
          auto const rx = detail::reachable(x, kind, reachable_cap, report.cap_hit);
          auto const ry = detail::reachable(y, kind, reachable_cap, report.cap_hit);
          bool const joinable = std::any_of(
              rx.begin(), rx.end(), [&ry](Word const& z) { return ry.count(z) != 0; });
          if (!joinable) {
            report.counterexamples.push_back({w, pos[a], pos[b], x, y});
          }
        }
      }
    });
    std::sort(report.counterexamples.begin(), report.counterexamples.end(),
              [](auto const& p, auto const& q) {
                return std::tie(p.word, p.first_position, p.second_position)
                       < std::tie(q.word, q.first_position, q.second_position);
              });
    return report;
  }

  struct NormalFormCounterexample {
    Word word;
    std::vector<Word> terminals;
  };

  struct UniqueNormalFormReport {
    std::size_t max_len;
    Natural max_index;
    std::size_t words_checked   = 0;
    std::size_t states_explored = 0;
    // inputs with more than one terminal word
    std::vector<NormalFormCounterexample> counterexamples{};
    // inputs whose unique terminal word differs from normalize()
    std::vector<Word> leftmost_mismatches{};
    // inputs for which different reduction orders move letters to different
    // final positions (the permutation would depend on the strategy)
    std::vector<Word> position_counterexamples{};
  };

  namespace detail {
    // Terminal tagged words of `kind` reachable from every word in `starts`.
    inline std::set<TaggedWord> terminals_of(std::set<TaggedWord> const& starts,
                                             ReductionKind kind,
                                             std::size_t& explored) {
      std::set<TaggedWord> seen(starts);
      std::vector<TaggedWord> frontier(starts.begin(), starts.end());
      std::set<TaggedWord> out;
      while (!frontier.empty()) {
        TaggedWord cur = std::move(frontier.back());
        frontier.pop_back();
        ++explored;
        auto const pos = redexes(cur, kind);
        if (pos.empty()) {
          out.insert(cur);
          continue;
        }
        for (auto k : pos) {
          TaggedWord nxt = step(cur, kind, k);
          if (seen.insert(nxt).second) {
            frontier.push_back(std::move(nxt));
          }
        }
      }
      return out;
    }
  }  // namespace detail

  // Every tagged terminal word of the composed reduction over all reduction
  // orders.
  [[nodiscard]] inline std::set<TaggedWord> terminal_words(Word const& w) {
    std::size_t explored = 0;
    auto const mid       = detail::terminals_of({tag(w)}, ReductionKind::separate, explored);
    return detail::terminals_of(mid, ReductionKind::order, explored);
  }

  // Explores every reduction order (separate in every order, then order in
  // every order from each separate-terminal word) for all words within bounds.
  [[nodiscard]] inline UniqueNormalFormReport check_unique_normal_form(std::size_t max_len,
                                                                       Natural max_index) {
    UniqueNormalFormReport report{max_len, max_index};
    for_each_word(max_len, max_index, [&](Word const& w) {
      ++report.words_checked;
      auto const mid = detail::terminals_of({tag(w)}, ReductionKind::separate, report.states_explored);
      auto const fin = detail::terminals_of(mid, ReductionKind::order, report.states_explored);
      std::set<Word> stripped;
      for (auto const& t : fin) {
        stripped.insert(strip(t));
      }
      if (stripped.size() != 1) {
        report.counterexamples.push_back({w, {stripped.begin(), stripped.end()}});
        return;
      }
      if (fin.size() != 1) {
        report.position_counterexamples.push_back(w);
      }
      if (*stripped.begin() != normal_form(w)) {
        report.leftmost_mismatches.push_back(w);
      }
    });
    return report;
  }

}  // namespace thompson_clt
