#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "support.hpp"
#include "thompson_clt/binning.hpp"
#include "thompson_clt/frep.hpp"

namespace tc = thompson_clt;
using tc::Permutation;
using tc::PairPartition;
using tc::Sign;

namespace {

  char const* const eight_letters = "g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1";

  // All neutral words of exact length d with indices below n, by brute force.
  std::vector<tc::Word> neutral_words(std::size_t d, tc::Natural n) {
    std::vector<tc::Word> out;
    tc::for_each_word(d, n - 1, [&](tc::Word const& w) {
      if (w.size() == d && tc::is_neutral(w)) {
        out.push_back(w);
      }
    });
    return out;
  }

  Permutation random_permutation(std::mt19937_64& g, std::size_t d) {
    std::vector<std::uint32_t> im(d);
    std::iota(im.begin(), im.end(), 1U);
    std::shuffle(im.begin(), im.end(), g);
    return Permutation(std::move(im));
  }

  std::int64_t diff(tc::Natural a, tc::Natural b) {
    return static_cast<std::int64_t>(a) - static_cast<std::int64_t>(b);
  }

}  // namespace

TEST(Permutation, CyclesAndImages) {
  Permutation const t({2, 4, 8, 6, 5, 1, 3, 7});
  EXPECT_EQ(t.cycles(), "(1,2,4,6)(3,8,7)");
  EXPECT_EQ(Permutation::from_cycles("(1,2,4,6)(3,8,7)", 8), t);
  EXPECT_EQ(Permutation::from_cycles("()", 3), Permutation::identity(3));
  EXPECT_EQ(Permutation::identity(4).cycles(), "()");
  EXPECT_EQ(tc::compose(t, t.inverse()), Permutation::identity(8));
  EXPECT_EQ(Permutation::unpack(t.packed(), 8), t);
  EXPECT_THROW(Permutation({1, 1, 2}), tc::domain_error);
  EXPECT_THROW((void)Permutation::from_cycles("(1,2,1)", 3), tc::domain_error);
  EXPECT_THROW((void)Permutation::from_cycles("(1,2", 3), tc::parse_error);
  EXPECT_THROW((void)Permutation::from_cycles("(1,9)", 3), tc::domain_error);
}

TEST(Permutation, CycleRoundTripOnRandomPermutations) {
  auto g = tc::testing::rng(30);
  for (int trial = 0; trial < 500; ++trial) {
    Permutation const t = random_permutation(g, 1 + trial % 12);
    ASSERT_EQ(Permutation::from_cycles(t.cycles(), t.size()), t);
    ASSERT_EQ(Permutation::unpack(t.packed(), t.size()), t);
  }
}

TEST(Partition, Rainbow) {
  EXPECT_EQ(tc::rainbow(8).to_string(), "[[1,8],[2,7],[3,6],[4,5]]");
  EXPECT_EQ(tc::rainbow(2).to_string(), "[[1,2]]");
  EXPECT_THROW((void)tc::rainbow(0), tc::domain_error);
  EXPECT_THROW((void)tc::rainbow(5), tc::domain_error);
}

TEST(Partition, RejectsBadBlocks) {
  EXPECT_THROW(PairPartition({{1, 2}, {2, 3}}), tc::domain_error);
  EXPECT_THROW(PairPartition({{1, 5}, {2, 3}}), tc::domain_error);
  EXPECT_EQ(PairPartition({{4, 1}, {3, 2}}).to_string(), "[[1,4],[2,3]]");
}

TEST(Tau, EightLetterWord) {
  Permutation const t = tc::tau_of(tc::parse_word(eight_letters));
  EXPECT_EQ(t.images(), (std::vector<std::uint32_t>{2, 4, 8, 6, 5, 1, 3, 7}));
  EXPECT_EQ(t.cycles(), "(1,2,4,6)(3,8,7)");
}

TEST(Tau, LengthTwoClassification) {
  for (tc::Natural i = 0; i < 6; ++i) {
    EXPECT_TRUE(tc::tau_of(tc::Word{tc::gen(i), tc::inv(i)}).is_identity());
    EXPECT_EQ(tc::tau_of(tc::Word{tc::inv(i), tc::gen(i)}), Permutation({2, 1}));
  }
}

TEST(Partition, EightLetterWord) {
  PairPartition const expected({{1, 8}, {2, 5}, {3, 6}, {4, 7}});
  EXPECT_EQ(tc::partition_of(tc::parse_word(eight_letters)), expected);
  EXPECT_EQ(tc::apply_to_partition(Permutation::from_cycles("(1,2,4,6)(3,8,7)", 8), expected),
            tc::rainbow(8));
}

TEST(Partition, SpacedWord) {
  tc::Word const w = tc::parse_word("g0 g75 g25^-1 g49^-1 g73^-1 g25 g50 g0^-1");
  EXPECT_EQ(tc::partition_of(w), PairPartition({{2, 5}, {4, 7}, {3, 6}, {1, 8}}));
}

TEST(Partition, Errors) {
  EXPECT_THROW((void)tc::partition_of(tc::parse_word("g1 g2")), tc::not_neutral);
  EXPECT_THROW((void)tc::partition_of(tc::parse_word("g1")), tc::domain_error);
  EXPECT_THROW((void)tc::partition_of(tc::Word{}), tc::domain_error);
  EXPECT_THROW((void)tc::apply_to_partition(Permutation::identity(4), tc::rainbow(2)), tc::domain_error);
}

TEST(CompleteFromPartition, Example) {
  tc::PartialWord p;
  p.signs   = {Sign::plus, Sign::minus, Sign::minus, Sign::minus, Sign::plus, Sign::plus};
  p.indices = {2, std::nullopt, std::nullopt, std::nullopt, 1, 0};
  EXPECT_EQ(tc::complete_from_partition(p, PairPartition({{1, 4}, {2, 5}, {3, 6}})),
            tc::parse_word("g2 g2^-1 g0^-1 g1^-1 g1 g0"));
}

TEST(CompleteFromPartition, Inconsistencies) {
  tc::PartialWord p;
  p.signs   = {Sign::plus, Sign::minus};
  p.indices = {3, std::nullopt};
  EXPECT_EQ(tc::complete_from_partition(p, tc::rainbow(2)), tc::parse_word("g3 g3^-1"));
  // blocks are unordered: the generator may stand to the right
  tc::PartialWord q;
  q.signs   = {Sign::minus, Sign::plus};
  q.indices = {std::nullopt, 3};
  EXPECT_EQ(tc::complete_from_partition(q, tc::rainbow(2)), tc::parse_word("g3^-1 g3"));
  // peeling forces g0 g0 g0^-1 g0^-1, whose partition is the rainbow
  tc::PartialWord r;
  r.signs   = {Sign::plus, Sign::plus, Sign::minus, Sign::minus};
  r.indices = {0, 0, std::nullopt, std::nullopt};
  EXPECT_THROW((void)tc::complete_from_partition(r, PairPartition({{1, 3}, {2, 4}})), tc::inconsistent_data);
  // a block joining two generators
  tc::PartialWord two_plus;
  two_plus.signs   = {Sign::plus, Sign::plus};
  two_plus.indices = {1, 1};
  EXPECT_THROW((void)tc::complete_from_partition(two_plus, tc::rainbow(2)), tc::inconsistent_data);
  tc::PartialWord wrong_len;
  wrong_len.signs   = {Sign::plus, Sign::minus};
  wrong_len.indices = {3};
  EXPECT_THROW((void)tc::complete_from_partition(wrong_len, tc::rainbow(2)), tc::domain_error);
  EXPECT_THROW((void)tc::complete_from_partition(p, tc::rainbow(4)), tc::domain_error);
  tc::PartialWord bad_known = p;
  bad_known.indices[1]      = 4;
  EXPECT_THROW((void)tc::complete_from_partition(bad_known, tc::rainbow(2)), tc::inconsistent_data);
}

TEST(CompleteFromPartition, RoundTripOverAllSmallNeutralWords) {
  auto const words = neutral_words(4, 5);
  ASSERT_FALSE(words.empty());
  for (auto const& w : words) {
    ASSERT_EQ(tc::complete_from_partition(tc::erase_inverse_indices(w), tc::partition_of(w)), w)
        << tc::format_word(w);
  }
}

TEST(CompleteFromPartition, RoundTripOnLongerRandomNeutralWords) {
  auto g = tc::testing::rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    tc::Word const w = tc::testing::random_neutral(g, 1 + trial % 5, 9);
    ASSERT_EQ(tc::complete_from_partition(tc::erase_inverse_indices(w), tc::partition_of(w)), w)
        << tc::format_word(w);
  }
}

TEST(CompleteFromSpaced, EightLetterExample) {
  Permutation const t = Permutation::from_cycles("(1,4,7,2)(3,6)(5,8)", 8);
  EXPECT_EQ(tc::complete_from_spaced(t, {{1, 0}, {2, 75}, {6, 25}, {7, 50}}),
            tc::parse_word("g0 g75 g25^-1 g49^-1 g73^-1 g25 g50 g0^-1"));
}

TEST(CompleteFromSpaced, LengthTwo) {
  for (tc::Natural k : {0U, 1U, 17U}) {
    EXPECT_EQ(tc::complete_from_spaced(Permutation::identity(2), {{1, k}}), (tc::Word{tc::gen(k), tc::inv(k)}));
  }
}

TEST(CompleteFromSpaced, Errors) {
  Permutation const t = Permutation::from_cycles("(1,4,7,2)(3,6)(5,8)", 8);
  // 52 is not below 75 - 3d = 51
  EXPECT_THROW((void)tc::complete_from_spaced(t, {{1, 0}, {2, 75}, {6, 25}, {7, 52}}), tc::domain_error);
  EXPECT_THROW((void)tc::complete_from_spaced(t, {{1, 0}, {2, 75}, {6, 25}}), tc::domain_error);
  EXPECT_THROW((void)tc::complete_from_spaced(t, {{1, 0}, {3, 75}, {6, 25}, {7, 50}}), tc::domain_error);
  EXPECT_THROW((void)tc::complete_from_spaced(Permutation::identity(3), {{1, 0}}), tc::domain_error);
  EXPECT_EQ(tc::complete_from_spaced(Permutation({2, 1}), {{2, 0}}), tc::parse_word("g0^-1 g0"));
}

TEST(CompleteFromSpaced, RandomSamplesRecoverTau) {
  auto g = tc::testing::rng(32);
  std::uniform_int_distribution<tc::Natural> jitter(0, 15);
  for (std::size_t d : {4U, 6U}) {
    for (int trial = 0; trial < 100; ++trial) {
      Permutation const t = random_permutation(g, d);
      Permutation const tinv = t.inverse();
      std::map<std::uint32_t, tc::Natural> gens;
      tc::Natural k = d + jitter(g);
      for (std::uint32_t l = static_cast<std::uint32_t>(d / 2); l >= 1; --l) {
        gens[tinv(l)] = k;
        k += 3 * d + 1 + jitter(g);
      }
      tc::Word const w = tc::complete_from_spaced(t, gens);
      ASSERT_TRUE(tc::is_neutral(w));
      ASSERT_EQ(tc::tau_of(w), t) << t.cycles();
      auto const want = tc::spaced_signs(t);
      for (std::size_t p = 0; p < d; ++p) {
        ASSERT_EQ(w[p].sign, want[p]);
      }
      for (auto const& [pos, idx] : gens) {
        ASSERT_EQ(w[pos - 1].index, idx);
      }
    }
  }
}

// Sign rule, displacement, pair spread and smallest-index pairing on every
// neutral word of the two exhaustive instances.
TEST(NeutralStructure, ExhaustiveInstances) {
  for (auto [d, n] : {std::pair<std::size_t, tc::Natural>{4, 6}, {6, 4}}) {
    auto const words = neutral_words(d, n);
    ASSERT_FALSE(words.empty());
    for (auto const& w : words) {
      tc::TaggedWord t = tc::tag(w);
      tc::normalize_in_place(t);
      Permutation const tau  = tc::tau_of_normalized(t);
      Permutation const tinv = tau.inverse();
      for (std::uint32_t l = 1; l <= d; ++l) {
        tc::Letter const& orig = w[tinv(l) - 1];
        ASSERT_EQ(orig.sign, l <= d / 2 ? Sign::plus : Sign::minus) << tc::format_word(w);
        ASSERT_LE(std::abs(diff(t[l - 1].letter.index, orig.index)), static_cast<std::int64_t>(d / 2))
            << tc::format_word(w);
      }
      for (std::uint32_t k = 1; k <= d / 2; ++k) {
        ASSERT_LE(std::abs(diff(w[tinv(k) - 1].index, w[tinv(d - k + 1) - 1].index)),
                  static_cast<std::int64_t>(d));
      }
      tc::Natural lo = w[0].index;
      for (std::size_t p = 0; p < d; ++p) {
        lo = std::min(lo, w[p].index);
      }
      PairPartition const pi = tc::partition_of(w);
      for (auto const& [a, b] : pi.blocks()) {
        ASSERT_EQ(w[a - 1].index == lo, w[b - 1].index == lo) << tc::format_word(w);
      }
    }
  }
}

TEST(NeutralStructure, DisplacementOnArbitraryWords) {
  auto g = tc::testing::rng(33);
  for (int trial = 0; trial < 5000; ++trial) {
    tc::Word const w = tc::testing::random_word_up_to(g, 10, 12);
    tc::TaggedWord t = tc::tag(w);
    tc::normalize_in_place(t);
    for (auto const& x : t) {
      ASSERT_LE(std::abs(diff(x.letter.index, w[x.origin - 1].index)), static_cast<std::int64_t>(w.size()))
          << tc::format_word(w);
    }
  }
}

// A word is neutral exactly when its normal form is u followed by u's formal inverse.
TEST(NeutralStructure, MirroredNormalFormMatchesTheOracle) {
  auto g = tc::testing::rng(34);
  auto mirrored = [](tc::Word const& nf) {
    std::size_t const d = nf.size();
    if (d % 2 != 0) {
      return false;
    }
    for (std::size_t k = 0; k < d / 2; ++k) {
      if (nf[k].sign != Sign::plus || nf[d - 1 - k].sign != Sign::minus || nf[k].index != nf[d - 1 - k].index) {
        return false;
      }
    }
    return true;
  };
  int neutral_seen = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    tc::Word const w = trial % 2 == 0 ? tc::testing::random_word_up_to(g, 8, 4)
                                      : tc::testing::random_neutral(g, 1 + trial % 4, 8);
    bool const neutral = tc::is_neutral(w);
    neutral_seen += neutral ? 1 : 0;
    ASSERT_EQ(mirrored(tc::normal_form(w)), neutral) << tc::format_word(w);
  }
  EXPECT_GT(neutral_seen, 5000);
}
