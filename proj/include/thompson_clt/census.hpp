#pragma once

// Counting neutral words of length d over indices 0..n-1, split by their
// permutation and pair partition, plus the binomial sandwich and moments.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "thompson_clt/binning.hpp"
#include "thompson_clt/dyadic.hpp"
#include "thompson_clt/errors.hpp"
#include "thompson_clt/frep.hpp"
#include "thompson_clt/rewrite.hpp"
#include "thompson_clt/word.hpp"

namespace thompson_clt {

  inline constexpr std::uint64_t default_budget_candidates = 100'000'000;
  inline constexpr std::uint64_t default_budget_halfwords  = 20'000'000;

  // C(a, b), zero when a < b or a < 0.
  [[nodiscard]] inline BigInt binomial(BigInt const& a, std::uint64_t b) {
    if (a < 0 || a < b) {
      return 0;
    }
    BigInt out = 1;
    for (std::uint64_t k = 0; k < b; ++k) {
      out *= a - k;
      out /= k + 1;
    }
    return out;
  }

  // k!!, with k!! = 1 for k <= 0.
  [[nodiscard]] inline BigInt double_factorial(std::int64_t k) {
    BigInt out = 1;
    for (; k > 1; k -= 2) {
      out *= k;
    }
    return out;
  }

  // All pair partitions of {1..d} in lexicographic order of their block lists.
  [[nodiscard]] inline std::vector<PairPartition> all_pair_partitions(std::size_t d) {
    std::vector<PairPartition> out;
    if (d % 2 != 0) {
      return out;
    }
    std::vector<Block> blocks;
    std::vector<bool> used(d + 1, false);
    auto rec = [&](auto&& self) -> void {
      std::uint32_t first = 1;
      while (first <= d && used[first]) {
        ++first;
      }
      if (first > d) {
        out.emplace_back(blocks);
        return;
      }
      used[first] = true;
      for (std::uint32_t second = first + 1; second <= d; ++second) {
        if (used[second]) {
          continue;
        }
        used[second] = true;
        blocks.emplace_back(first, second);
        self(self);
        blocks.pop_back();
        used[second] = false;
      }
      used[first] = false;
    };
    rec(rec);
    return out;
  }

  // Number of τ in S_d with τ(p) = rainbow, by exhausting S_d.
  [[nodiscard]] inline BigInt count_taus_to_rainbow(PairPartition const& p) {
    std::size_t const d = p.size();
    if (d > 8) {
      throw domain_error("exhaustive count over S_d is limited to d <= 8");
    }
    PairPartition const target = rainbow(d);
    std::vector<std::uint32_t> im(d);
    for (std::size_t k = 0; k < d; ++k) {
      im[k] = static_cast<std::uint32_t>(k + 1);
    }
    std::uint64_t count = 0;
    do {
      if (apply_to_partition(Permutation(im), p) == target) {
        ++count;
      }
    } while (std::next_permutation(im.begin(), im.end()));
    return count;
  }

  namespace detail {
    // b^e, saturating at the uint64 maximum.
    inline std::uint64_t saturating_pow(std::uint64_t b, std::size_t e) {
      std::uint64_t out = 1;
      for (std::size_t k = 0; k < e; ++k) {
        if (b != 0 && out > std::numeric_limits<std::uint64_t>::max() / b) {
          return std::numeric_limits<std::uint64_t>::max();
        }
        out *= b;
      }
      return out;
    }

    // Letter codes run through the alphabet in Letter order: g0^-1, g0, g1^-1, ...
    inline Letter letter_of_code(std::uint64_t c) noexcept {
      return {c / 2, c % 2 == 0 ? Sign::minus : Sign::plus};
    }

    inline Word decode(std::uint64_t id, std::size_t len, std::uint64_t base) {
      std::vector<Letter> letters(len);
      for (std::size_t k = len; k-- > 0;) {
        letters[k] = letter_of_code(id % base);
        id /= base;
      }
      return Word(std::move(letters));
    }

    inline std::size_t natural_n(Natural n) {
      if (n == 0) {
        throw domain_error("n must be at least 1");
      }
      if (n > (std::numeric_limits<std::uint32_t>::max() >> 2)) {
        throw domain_error("n is too large to enumerate");
      }
      return static_cast<std::size_t>(n);
    }
  }  // namespace detail

  // Worker count: THOMPSON_CLT_THREADS if set and positive, else the hardware.
  [[nodiscard]] inline unsigned worker_count() {
    unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    if (char const* env = std::getenv("THOMPSON_CLT_THREADS")) {
      char* end            = nullptr;
      unsigned long const v = std::strtoul(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) {
        return static_cast<unsigned>(std::min<unsigned long>(v, 1024));
      }
    }
    return hw;
  }

  // All neutral words of length d over indices 0..n-1 in lexicographic order.
  // Odd d yields nothing without work unless verify_odd is set.
  [[nodiscard]] inline std::vector<Word> enumerate_naive(std::size_t d,
                                                         Natural n,
                                                         std::uint64_t budget_candidates
                                                         = default_budget_candidates,
                                                         bool verify_odd = false) {
    std::size_t const nn = detail::natural_n(n);
    std::vector<Word> out;
    if (d % 2 != 0 && !verify_odd) {
      return out;
    }
    std::uint64_t const base       = 2 * static_cast<std::uint64_t>(nn);
    std::uint64_t const candidates = detail::saturating_pow(base, d);
    if (candidates > budget_candidates) {
      throw budget_error("budget-candidates (use the meet-in-the-middle census)", candidates,
                         budget_candidates);
    }
    std::vector<PLMap> prefix(d + 1);
    std::vector<Letter> letters(d);
    auto rec = [&](auto&& self, std::size_t depth) -> void {
      if (depth == d) {
        if (prefix[d].is_identity()) {
          out.emplace_back(letters);
        }
        return;
      }
      for (std::uint64_t c = 0; c < base; ++c) {
        letters[depth]    = detail::letter_of_code(c);
        prefix[depth + 1] = product(prefix[depth], letter_map(letters[depth]));
        self(self, depth + 1);
      }
    };
    rec(rec, 0);
    if (d % 2 != 0 && !out.empty()) {
      throw internal_error("found a neutral word of odd length");
    }
    return out;
  }

  struct CensusTable {
    std::size_t d = 0;
    Natural n     = 0;
    BigInt total  = 0;
    std::map<Permutation, BigInt> by_tau{};
    std::map<PairPartition, BigInt> by_partition{};

    // Both marginals sum to the total, and each partition count is the sum
    // of the counts of the permutations that send it to the rainbow.
    [[nodiscard]] bool consistent() const {
      BigInt s1 = 0;
      for (auto const& [t, c] : by_tau) {
        s1 += c;
      }
      BigInt s2 = 0;
      for (auto const& [p, c] : by_partition) {
        s2 += c;
      }
      if (s1 != total || s2 != total) {
        return false;
      }
      if (d == 0 || d % 2 != 0) {
        return true;
      }
      std::map<PairPartition, BigInt> rebuilt;
      for (auto const& [t, c] : by_tau) {
        rebuilt[partition_from_tau(t)] += c;
      }
      return rebuilt == by_partition;
    }

    // 0 for permutations that never occur.
    [[nodiscard]] BigInt count(Permutation const& t) const {
      auto it = by_tau.find(t);
      return it == by_tau.end() ? BigInt(0) : it->second;
    }
  };

  namespace detail {
    // Fills by_partition from by_tau.
    inline void derive_partitions(CensusTable& table) {
      table.by_partition.clear();
      if (table.d == 0) {
        if (table.total != 0) {
          table.by_partition[PairPartition()] = table.total;
        }
        return;
      }
      for (auto const& [t, c] : table.by_tau) {
        table.by_partition[partition_from_tau(t)] += c;
      }
    }
  }  // namespace detail

  [[nodiscard]] inline CensusTable census_of_words(std::size_t d, Natural n, std::vector<Word> const& words) {
    CensusTable table{d, n};
    for (auto const& w : words) {
      if (w.size() != d) {
        throw domain_error("word length differs from d");
      }
      table.total += 1;
      table.by_tau[tau_of(w)] += 1;
    }
    detail::derive_partitions(table);
    return table;
  }

  struct MitmOptions {
    std::uint64_t budget_halfwords = default_budget_halfwords;
    unsigned threads               = 0;  // 0: worker_count()
  };

  // Meet in the middle: a word h1 h2 of even length d is neutral iff h1 and
  // the formal inverse of h2 evaluate to the same element. So for every class
  // C of half-words with equal evaluation, the |C|^2 words h1 * inverse(h)
  // with h1, h in C are exactly the neutral words with left half in C.
  [[nodiscard]] inline CensusTable enumerate_mitm(std::size_t d, Natural n, MitmOptions const& opt = {}) {
    std::size_t const nn = detail::natural_n(n);
    CensusTable table{d, n};
    if (d % 2 != 0) {
      return table;
    }
    if (d == 0) {
      table.total                = 1;
      table.by_tau[Permutation()] = 1;
      detail::derive_partitions(table);
      return table;
    }
    if (d > 16) {
      throw domain_error("the census packs permutations of at most 16 points");
    }
    std::size_t const h        = d / 2;
    std::uint64_t const base   = 2 * static_cast<std::uint64_t>(nn);
    std::uint64_t const halves = detail::saturating_pow(base, h);
    if (halves > opt.budget_halfwords) {
      throw budget_error("budget-halfwords", halves, opt.budget_halfwords);
    }
    unsigned const workers
        = static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(
                                                               opt.threads == 0 ? worker_count() : opt.threads, base)));

    // Evaluate every half-word; worker w takes the first letters c = w mod T.
    struct Entry {
      std::uint64_t hash;
      std::uint64_t id;
      bool operator<(Entry const& o) const noexcept {
        return hash != o.hash ? hash < o.hash : id < o.id;
      }
    };
    std::vector<std::vector<Entry>> parts(workers);
    auto evaluate = [&](unsigned w) {
      auto& mine = parts[w];
      std::vector<PLMap> prefix(h + 1);
      std::vector<std::uint64_t> code(h);
      auto rec = [&](auto&& self, std::size_t depth, std::uint64_t id) -> void {
        if (depth == h) {
          std::string const key = canonical_key(prefix[h]);
          mine.push_back({boost::hash_range(key.begin(), key.end()), id});
          return;
        }
        for (std::uint64_t c = 0; c < base; ++c) {
          prefix[depth + 1] = product(prefix[depth], letter_map(detail::letter_of_code(c)));
          self(self, depth + 1, id * base + c);
        }
      };
      for (std::uint64_t c = w; c < base; c += workers) {
        prefix[1] = letter_map(detail::letter_of_code(c));
        rec(rec, 1, c);
      }
    };
    {
      std::vector<std::thread> pool;
      for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(evaluate, w);
      }
      evaluate(0);
      for (auto& t : pool) {
        t.join();
      }
    }
    std::vector<Entry> entries;
    entries.reserve(halves);
    for (auto& p : parts) {
      entries.insert(entries.end(), p.begin(), p.end());
      std::vector<Entry>().swap(p);
    }
    std::sort(entries.begin(), entries.end());

    // Split equal-hash runs into exact classes; ids are regrouped in place
    // and `bounds` marks where each class starts.
    std::vector<std::uint64_t> ids(entries.size());
    std::vector<std::size_t> bounds;
    {
      std::size_t at = 0;
      for (std::size_t s = 0; s < entries.size();) {
        std::size_t e = s + 1;
        while (e < entries.size() && entries[e].hash == entries[s].hash) {
          ++e;
        }
        if (e - s == 1) {
          bounds.push_back(at);
          ids[at++] = entries[s].id;
        } else {
          std::vector<std::pair<std::string, std::uint64_t>> keyed;
          keyed.reserve(e - s);
          for (std::size_t k = s; k < e; ++k) {
            keyed.emplace_back(canonical_key(eval_word(detail::decode(entries[k].id, h, base))),
                               entries[k].id);
          }
          std::sort(keyed.begin(), keyed.end());
          for (std::size_t k = 0; k < keyed.size(); ++k) {
            if (k == 0 || keyed[k].first != keyed[k - 1].first) {
              bounds.push_back(at);
            }
            ids[at++] = keyed[k].second;
          }
        }
        s = e;
      }
      bounds.push_back(at);
    }
    std::vector<Entry>().swap(entries);

    // Join within classes; workers take contiguous class ranges of similar
    // total work and count permutation codes.
    std::size_t const classes = bounds.size() - 1;
    std::vector<std::size_t> cut{0};
    {
      long double total_work = 0;
      for (std::size_t c = 0; c < classes; ++c) {
        auto const m = static_cast<long double>(bounds[c + 1] - bounds[c]);
        total_work += m * m;
      }
      long double acc = 0;
      for (std::size_t c = 0; c < classes; ++c) {
        auto const m = static_cast<long double>(bounds[c + 1] - bounds[c]);
        acc += m * m;
        if (cut.size() < workers && acc >= total_work * static_cast<long double>(cut.size()) / workers) {
          cut.push_back(c + 1);
        }
      }
      while (cut.size() <= workers) {
        cut.push_back(classes);
      }
    }
    std::vector<std::unordered_map<std::uint64_t, std::uint64_t>> counts(workers);
    auto join = [&](unsigned w) {
      auto& mine = counts[w];
      TaggedWord word(d);
      std::vector<Word> left;
      for (std::size_t c = cut[w]; c < cut[w + 1]; ++c) {
        left.clear();
        for (std::size_t k = bounds[c]; k < bounds[c + 1]; ++k) {
          left.push_back(detail::decode(ids[k], h, base));
        }
        for (auto const& a : left) {
          for (auto const& b : left) {
            for (std::size_t k = 0; k < h; ++k) {
              word[k]     = {a[k], static_cast<std::uint32_t>(k + 1)};
              word[h + k] = {Letter{b[h - 1 - k].index, flip(b[h - 1 - k].sign)},
                             static_cast<std::uint32_t>(h + k + 1)};
            }
            normalize_in_place(word);
            std::uint64_t code = 0;
            for (std::size_t k = 0; k < d; ++k) {
              code |= static_cast<std::uint64_t>(k) << (4 * (word[k].origin - 1));
            }
            ++mine[code];
          }
        }
      }
    };
    {
      std::vector<std::thread> pool;
      for (unsigned w = 1; w < workers; ++w) {
        pool.emplace_back(join, w);
      }
      join(0);
      for (auto& t : pool) {
        t.join();
      }
    }
    std::map<std::uint64_t, std::uint64_t> merged;
    for (auto const& m : counts) {
      for (auto const& [code, c] : m) {
        merged[code] += c;
      }
    }
    for (auto const& [code, c] : merged) {
      table.by_tau[Permutation::unpack(code, d)] += c;
      table.total += c;
    }
    detail::derive_partitions(table);
    return table;
  }

  struct CensusOptions {
    std::uint64_t budget_candidates = default_budget_candidates;
    std::uint64_t budget_halfwords  = default_budget_halfwords;
    unsigned threads                = 0;
    bool verify_odd                 = false;  // enumerate odd d naively instead of short-circuiting
  };

  [[nodiscard]] inline CensusTable census(std::size_t d, Natural n, CensusOptions const& opt = {}) {
    if (d % 2 != 0) {
      if (opt.verify_odd) {
        return census_of_words(d, n, enumerate_naive(d, n, opt.budget_candidates, true));
      }
      detail::natural_n(n);
      return CensusTable{d, n};
    }
    return enumerate_mitm(d, n, {opt.budget_halfwords, opt.threads});
  }

  struct Bounds {
    BigInt lower;
    BigInt upper;
    bool lower_asserted;  // n > 3d(d-1)/2
  };

  // (C(n + 2d - 3d^2/2, d/2), C(n + d^2/2 - 2, d/2)) for each N(d, n, τ).
  [[nodiscard]] inline Bounds sandwich_bounds(std::size_t d, Natural n) {
    if (d % 2 != 0) {
      throw domain_error("sandwich bounds need even d");
    }
    BigInt const dd = d;
    BigInt const nn = n;
    return {binomial(nn + 2 * dd - 3 * dd * dd / 2, d / 2), binomial(nn + dd * dd / 2 - 2, d / 2),
            2 * nn > 3 * dd * (dd - 1)};
  }

  struct MomentReport {
    std::size_t d = 0;
    Natural n     = 0;
    BigInt total  = 0;
    BigRational moment;
    BigInt limit;
    BigRational lower_envelope;
    BigRational upper_envelope;
    bool lower_asserted = false;

    [[nodiscard]] bool within_envelope() const {
      return moment <= upper_envelope && (!lower_asserted || lower_envelope <= moment);
    }
  };

  // φ(s_n^d) = |W0(d, n)| / (2n)^(d/2) from an existing census.
  [[nodiscard]] inline MomentReport moment_of(CensusTable const& table) {
    MomentReport r;
    r.d     = table.d;
    r.n     = table.n;
    r.total = table.total;
    if (table.d % 2 != 0) {
      r.moment = 0;
      r.limit  = 0;
      return r;
    }
    BigInt const denom = boost::multiprecision::pow(BigInt(2 * table.n), static_cast<unsigned>(table.d / 2));
    r.moment           = BigRational(table.total, denom);
    r.limit            = double_factorial(static_cast<std::int64_t>(table.d) - 1);
    Bounds const b     = sandwich_bounds(table.d, table.n);
    BigInt const scale = r.limit * double_factorial(static_cast<std::int64_t>(table.d));
    r.lower_envelope   = BigRational(scale * b.lower, denom);
    r.upper_envelope   = BigRational(scale * b.upper, denom);
    r.lower_asserted   = b.lower_asserted;
    return r;
  }

  [[nodiscard]] inline MomentReport moment(std::size_t d, Natural n, CensusOptions const& opt = {}) {
    detail::natural_n(n);
    if (d % 2 != 0 && !opt.verify_odd) {
      return moment_of(CensusTable{d, n});
    }
    return moment_of(census(d, n, opt));
  }

}  // namespace thompson_clt
