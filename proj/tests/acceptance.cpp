// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-thompson_clt-cli>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "thompson_clt/thompson_clt.hpp"

namespace tc = thompson_clt;
using tc::BigInt;
using tc::BigRational;
using tc::Natural;
using tc::Permutation;

namespace {

  // Wall-clock limits per criterion, in seconds.
  constexpr double limit_examples   = 1.0;
  constexpr double limit_oracle     = 30.0;
  constexpr double limit_unique_nf  = 300.0;
  constexpr double limit_census     = 120.0;
  constexpr double limit_d2_moment  = 1.0;
  constexpr double limit_sandwich   = 300.0;
  constexpr double limit_clt        = 900.0;
  constexpr double limit_identities = 300.0;
  constexpr double limit_completion = 120.0;

  // Frozen census results; the envelope checks do not depend on them.
  BigRational const golden_moment_4_60(662, 225);
  BigRational const golden_moment_6_60(204421, 14400);
  BigRational const fourth_moment_checkpoint(5, 2);

  constexpr std::size_t random_steps     = 10'000;
  constexpr std::size_t spaced_instances = 100;

  std::string cli_path;

  struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, std::string const& what) {
      if (!ok) {
        if (!pass) {
          detail << "; ";
        }
        pass = false;
        detail << what;
      }
    }
  };

  struct Capture {
    std::string out;
    int status = -1;
  };

  std::string quote(std::string const& s) {
    std::string q = "'";
    for (char c : s) {
      q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    }
    return q + "'";
  }

  Capture run_cli(std::vector<std::string> const& args) {
    std::string cmd = quote(cli_path);
    for (auto const& a : args) {
      cmd += ' ' + quote(a);
    }
    cmd += " 2>/dev/null";
    Capture c;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
      return c;
    }
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
      c.out.append(buf, got);
    }
    int const st = pclose(pipe);
    c.status     = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return c;
  }

  std::vector<Permutation> symmetric_group(std::size_t d) {
    std::vector<std::uint32_t> im(d);
    std::iota(im.begin(), im.end(), 1U);
    std::vector<Permutation> out;
    do {
      out.emplace_back(im);
    } while (std::next_permutation(im.begin(), im.end()));
    return out;
  }

  // Every census computed by the suite, kept for the identity checks.
  std::map<std::pair<std::size_t, Natural>, tc::CensusTable> tables;

  tc::CensusTable const& table(std::size_t d, Natural n) {
    auto it = tables.find({d, n});
    if (it == tables.end()) {
      it = tables.emplace(std::pair{d, n}, tc::census(d, n)).first;
    }
    return it->second;
  }

  std::string str(BigRational const& q) {
    std::ostringstream os;
    os << q;
    return os.str();
  }

  // 1
  void worked_examples(Outcome& o) {
    auto expect = [&](std::vector<std::string> const& args, std::string const& want) {
      Capture const c = run_cli(args);
      o.require(c.status == 0 && c.out == want, args[0] + " printed '" + c.out + "'");
    };
    expect({"normalize", "g3^-1 g6 g0^-1 g2 g4^-1"}, "g7 g3 g0^-1 g2^-1 g4^-1\n");
    expect({"tau", "g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1"}, "[2,4,8,6,5,1,3,7]\n(1,2,4,6)(3,8,7)\n");
    expect({"partition", "g2 g0 g18^-1 g4^-1 g0^-1 g16 g3 g2^-1"}, "[[1,8],[2,5],[3,6],[4,7]]\n");
    expect({"complete", R"({"mode":"partition","d":6,"signs":[1,-1,-1,-1,1,1],)"
                        R"("partition":[[1,4],[2,5],[3,6]],"known":{"1":2,"5":1,"6":0}})"},
           "g2 g2^-1 g0^-1 g1^-1 g1 g0\n");
    expect({"complete", R"({"mode":"spaced","d":8,"tau":[4,1,6,7,8,3,2,5],)"
                        R"("known":{"1":0,"2":75,"6":25,"7":50}})"},
           "g0 g75 g25^-1 g49^-1 g73^-1 g25 g50 g0^-1\n");
    o.detail << "5 CLI outputs";
  }

  // 2
  void oracle_soundness(Outcome& o) {
    auto const rel = tc::verify_relations(8);
    o.require(rel.checks.size() == 36 && rel.all_pass(), "relation failures");
    std::mt19937_64 g(0xacce97);
    std::uniform_int_distribution<std::size_t> len(2, 8);
    std::uniform_int_distribution<Natural> idx(0, 12);
    std::bernoulli_distribution plus(0.5);
    tc::ReductionKind const kinds[] = {tc::ReductionKind::separate, tc::ReductionKind::order,
                                       tc::ReductionKind::push_smallest};
    std::size_t done = 0;
    std::size_t broken = 0;
    std::size_t per_kind[3] = {0, 0, 0};
    while (done < random_steps) {
      std::vector<tc::Letter> letters(len(g));
      for (auto& l : letters) {
        l = {idx(g), plus(g) ? tc::Sign::plus : tc::Sign::minus};
      }
      tc::TaggedWord const w = tc::tag(tc::Word(std::move(letters)));
      std::size_t const which = done % 3;
      auto const pos          = tc::redexes(w, kinds[which]);
      if (pos.empty()) {
        continue;
      }
      std::size_t const k = pos[std::uniform_int_distribution<std::size_t>(0, pos.size() - 1)(g)];
      auto const s        = tc::step(w, kinds[which], k);
      if (tc::eval_word(tc::strip(s)) != tc::eval_word(tc::strip(w))) {
        ++broken;
      }
      ++per_kind[which];
      ++done;
    }
    o.require(broken == 0, std::to_string(broken) + " steps changed the element");
    o.detail << "36 relations, " << done << " steps (" << per_kind[0] << "/" << per_kind[1] << "/"
             << per_kind[2] << ")";
  }

  // 3
  void unique_normal_form(Outcome& o) {
    auto const u = tc::check_unique_normal_form(4, 4);
    o.require(u.counterexamples.empty(), "multiple terminal words");
    o.require(u.leftmost_mismatches.empty(), "leftmost result differs");
    std::size_t peaks = 0;
    for (auto kind : {tc::ReductionKind::separate, tc::ReductionKind::order}) {
      auto const c = tc::check_local_confluence(kind, 3, 6);
      o.require(c.counterexamples.empty() && !c.cap_hit, tc::to_string(kind) + " not locally confluent");
      peaks += c.peaks_checked;
    }
    o.detail << u.words_checked << " words, " << u.states_explored << " states, " << peaks << " peaks";
  }

  // 4
  void census_cross_validation(Outcome& o) {
    std::size_t instances = 0;
    for (auto [d, nmax] : {std::pair<std::size_t, Natural>{2, 12}, {4, 8}, {6, 3}}) {
      for (Natural n = 1; n <= nmax; ++n) {
        auto const naive = tc::enumerate_naive(d, n);
        auto const& mitm = table(d, n);
        o.require(mitm.total == BigInt(naive.size()),
                  "total differs at d=" + std::to_string(d) + " n=" + std::to_string(n));
        o.require(mitm.by_tau == tc::census_of_words(d, n, naive).by_tau,
                  "per-permutation counts differ at d=" + std::to_string(d) + " n=" + std::to_string(n));
        ++instances;
      }
    }
    o.detail << instances << " instances";
  }

  // 5
  void exact_d2_moment(Outcome& o) {
    for (Natural n = 1; n <= 100; ++n) {
      o.require(tc::moment(2, n).moment == 1, "moment(2," + std::to_string(n) + ") != 1");
    }
    o.detail << "n = 1..100";
  }

  // 6
  void sandwich(Outcome& o) {
    std::size_t checks = 0;
    for (Natural n : {20U, 30U, 40U, 60U}) {
      auto const b = tc::sandwich_bounds(4, n);
      o.require(b.lower == tc::binomial(BigInt(n) - 16, 2) && b.upper == tc::binomial(BigInt(n) + 6, 2),
                "bound formula at n=" + std::to_string(n));
      o.require(b.lower_asserted == (n > 18), "lower bound flag at n=" + std::to_string(n));
      for (auto const& t : symmetric_group(4)) {
        BigInt const c = table(4, n).count(t);
        o.require(c <= b.upper && (!b.lower_asserted || b.lower <= c),
                  "N(4," + std::to_string(n) + "," + t.cycles() + ") out of bounds");
        ++checks;
      }
    }
    for (Natural n = 4; n <= 40; ++n) {
      auto const b = tc::sandwich_bounds(2, n);
      for (auto const& t : symmetric_group(2)) {
        BigInt const c = table(2, n).count(t);
        o.require(c == n && b.lower == n - 2 && b.upper == n && b.lower <= c && c <= b.upper,
                  "N(2," + std::to_string(n) + "," + t.cycles() + ")");
        ++checks;
      }
    }
    o.detail << checks << " counts in bounds";
  }

  // 7
  void clt_trend(Outcome& o) {
    BigRational prev = 0;
    for (Natural n : {20U, 40U, 60U}) {
      auto const r          = tc::moment_of(table(4, n));
      BigRational const den = BigRational(BigInt(4) * n * n);
      BigRational const lo  = BigRational(24 * tc::binomial(BigInt(n) - 16, 2)) / den;
      BigRational const hi  = BigRational(24 * tc::binomial(BigInt(n) + 6, 2)) / den;
      o.require(r.lower_envelope == lo && r.upper_envelope == hi, "envelope formula at n=" + std::to_string(n));
      o.require(lo <= r.moment && r.moment <= hi, "moment(4," + std::to_string(n) + ") outside envelope");
      o.require(r.moment > prev && r.moment < 3, "moment(4,n) not increasing below 3");
      prev = r.moment;
      o.detail << "m4(" << n << ")=" << str(r.moment) << " ";
    }
    o.require(prev >= fourth_moment_checkpoint, "moment(4,60) below 2.5");
    o.require(prev == golden_moment_4_60, "moment(4,60) differs from the frozen value");

    std::uint64_t const halves = 120ULL * 120ULL * 120ULL;
    if (halves > tc::default_budget_halfwords) {
      o.detail << "moment(6,60) skipped: half-word budget " << tc::default_budget_halfwords << " < " << halves;
      return;
    }
    auto const r6 = tc::moment_of(table(6, 60));
    o.require(r6.within_envelope(), "moment(6,60) outside envelope");
    o.require(r6.limit == 15, "limit of the sixth moment");
    o.require(r6.moment == golden_moment_6_60, "moment(6,60) differs from the frozen value");
    o.detail << "m6(60)=" << str(r6.moment) << " in [" << str(r6.lower_envelope) << ", "
             << str(r6.upper_envelope) << "]";
  }

  // 8
  void identities(Outcome& o) {
    for (std::int64_t d : {2, 4, 6}) {
      for (auto const& p : tc::all_pair_partitions(static_cast<std::size_t>(d))) {
        o.require(tc::count_taus_to_rainbow(p) == tc::double_factorial(d), "count_taus at " + p.to_string());
      }
    }
    for (std::int64_t d : {2, 4, 6, 8}) {
      o.require(BigInt(tc::all_pair_partitions(static_cast<std::size_t>(d)).size())
                    == tc::double_factorial(d - 1),
                "|P2(" + std::to_string(d) + ")|");
    }
    for (auto const& [key, t] : tables) {
      o.require(t.consistent(), "census (" + std::to_string(key.first) + "," + std::to_string(key.second)
                                    + ") marginals disagree");
    }
    o.detail << tables.size() << " census tables consistent";
  }

  // 9
  void completion_round_trips(Outcome& o) {
    auto const words = tc::enumerate_naive(4, 5);
    std::size_t ok   = 0;
    for (auto const& w : words) {
      try {
        ok += tc::complete_from_partition(tc::erase_inverse_indices(w), tc::partition_of(w)) == w ? 1 : 0;
      } catch (tc::error const&) {
      }
    }
    o.require(ok == words.size(), std::to_string(words.size() - ok) + " partition completions failed");
    std::mt19937_64 g(0x5bacedULL);
    std::uniform_int_distribution<Natural> jitter(0, 20);
    std::size_t spaced_ok = 0;
    std::size_t spaced_total = 0;
    for (std::size_t d : {4U, 6U}) {
      for (std::size_t trial = 0; trial < spaced_instances; ++trial) {
        std::vector<std::uint32_t> im(d);
        std::iota(im.begin(), im.end(), 1U);
        std::shuffle(im.begin(), im.end(), g);
        Permutation const t(im);
        Permutation const tinv = t.inverse();
        std::map<std::uint32_t, Natural> gens;
        Natural k = jitter(g);
        for (auto l = static_cast<std::uint32_t>(d / 2); l >= 1; --l) {
          gens[tinv(l)] = k;
          k += 3 * d + 1 + jitter(g);
        }
        ++spaced_total;
        try {
          spaced_ok += tc::tau_of(tc::complete_from_spaced(t, gens)) == t ? 1 : 0;
        } catch (tc::error const&) {
        }
      }
    }
    o.require(spaced_ok == spaced_total, std::to_string(spaced_total - spaced_ok) + " spaced completions failed");
    o.detail << ok << "/" << words.size() << " partition, " << spaced_ok << "/" << spaced_total << " spaced";
  }

  struct Criterion {
    int id;
    char const* name;
    double limit;
    std::function<void(Outcome&)> body;
  };

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <thompson_clt executable>\n";
    return 2;
  }
  cli_path = argv[1];

  std::vector<Criterion> const criteria{
      {1, "example fidelity", limit_examples, worked_examples},
      {2, "oracle soundness", limit_oracle, oracle_soundness},
      {3, "unique normal form", limit_unique_nf, unique_normal_form},
      {4, "census cross-validation", limit_census, census_cross_validation},
      {5, "exact second moment", limit_d2_moment, exact_d2_moment},
      {6, "sandwich bounds", limit_sandwich, sandwich},
      {7, "moment trend", limit_clt, clt_trend},
      {8, "combinatorial identities", limit_identities, identities},
      {9, "completion round trips", limit_completion, completion_round_trips},
  };

  int failures = 0;
  for (auto const& c : criteria) {
    Outcome o;
    auto const start = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (std::exception const& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double const secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs <= c.limit, "exceeded " + std::to_string(c.limit) + " s");
    failures += o.pass ? 0 : 1;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.str().c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
