#pragma once

// JSON and CSV renderings of every result type. Big integers are emitted as
// decimal strings so no consumer silently loses precision. Each JSON document
// carries a "schema" field naming the file under schemas/ that describes it.

#include <cstddef>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thompson_clt/binning.hpp"
#include "thompson_clt/census.hpp"
#include "thompson_clt/frep.hpp"
#include "thompson_clt/rewrite.hpp"
#include "thompson_clt/word.hpp"

namespace thompson_clt::io {

  using json = nlohmann::ordered_json;

  inline constexpr char const* schema_prefix = "thompson-clt/";

  [[nodiscard]] inline std::string schema_id(std::string const& name) {
    return std::string(schema_prefix) + name + "/v1";
  }

  [[nodiscard]] inline json document(std::string const& name) {
    json j;
    j["schema"] = schema_id(name);
    return j;
  }

  [[nodiscard]] inline std::string big(BigInt const& v) {
    return v.str();
  }

  [[nodiscard]] inline json rational(BigRational const& q) {
    return {{"num", big(boost::multiprecision::numerator(q))},
            {"den", big(boost::multiprecision::denominator(q))}};
  }

  [[nodiscard]] inline json to_json(Permutation const& t) {
    return {{"images", t.images()}, {"cycles", t.cycles()}};
  }

  [[nodiscard]] inline json to_json(PairPartition const& p) {
    json out = json::array();
    for (auto const& [a, b] : p.blocks()) {
      out.push_back({a, b});
    }
    return out;
  }

  [[nodiscard]] inline json to_json(TaggedLetter const& t) {
    return {{"letter", format_letter(t.letter)}, {"origin", t.origin}};
  }

  [[nodiscard]] inline json to_json(StepTrace const& trace) {
    json out = json::array();
    for (auto const& s : trace) {
      out.push_back({{"kind", to_string(s.kind)},
                     {"position", s.position},
                     {"before", {to_json(s.before[0]), to_json(s.before[1])}},
                     {"after", {to_json(s.after[0]), to_json(s.after[1])}}});
    }
    return out;
  }

  [[nodiscard]] inline json to_json(Word const& input, Normalization const& r, bool with_trace) {
    json j           = document("normalize");
    j["input"]       = format_word(input);
    j["normal_form"] = format_word(strip(r.word));
    j["steps"]       = r.trace.size();
    j["origins"]     = json::array();
    for (auto const& t : r.word) {
      j["origins"].push_back(t.origin);
    }
    if (with_trace) {
      j["trace"] = to_json(r.trace);
    }
    return j;
  }

  [[nodiscard]] inline json to_json(PLMap const& f) {
    json j           = document("eval");
    j["breakpoints"] = json::array();
    j["values"]      = json::array();
    for (std::size_t k = 0; k < f.breakpoints().size(); ++k) {
      j["breakpoints"].push_back(f.breakpoints()[k].to_string());
      j["values"].push_back(f.values()[k].to_string());
    }
    j["slope_exponents"] = f.slope_exponents();
    j["identity"]        = f.is_identity();
    return j;
  }

  [[nodiscard]] inline json to_json(RelationReport const& r) {
    json j         = document("relations");
    j["max_index"] = r.max_index;
    j["checked"]   = r.checks.size();
    j["all_pass"]  = r.all_pass();
    j["failures"]  = json::array();
    for (auto const& c : r.failures()) {
      j["failures"].push_back({{"n", c.n}, {"k", c.k}});
    }
    return j;
  }

  [[nodiscard]] inline json to_json(ConfluenceReport const& r) {
    json j                 = document("confluence");
    j["kind"]              = to_string(r.kind);
    j["max_len"]           = r.max_len;
    j["max_index"]         = r.max_index;
    j["words_checked"]     = r.words_checked;
    j["peaks_checked"]     = r.peaks_checked;
    j["overlapping_peaks"] = r.overlapping_peaks;
    j["reachable_cap"]     = r.reachable_cap;
    j["cap_hit"]           = r.cap_hit;
    j["counterexamples"]   = json::array();
    for (auto const& c : r.counterexamples) {
      j["counterexamples"].push_back({{"word", format_word(c.word)},
                                      {"positions", {c.first_position, c.second_position}},
                                      {"first", format_word(c.first)},
                                      {"second", format_word(c.second)}});
    }
    return j;
  }

  [[nodiscard]] inline json to_json(UniqueNormalFormReport const& r) {
    json j               = document("unique-nf");
    j["max_len"]         = r.max_len;
    j["max_index"]       = r.max_index;
    j["words_checked"]   = r.words_checked;
    j["states_explored"] = r.states_explored;
    j["counterexamples"] = json::array();
    for (auto const& c : r.counterexamples) {
      json terms = json::array();
      for (auto const& t : c.terminals) {
        terms.push_back(format_word(t));
      }
      j["counterexamples"].push_back({{"word", format_word(c.word)}, {"terminals", terms}});
    }
    auto words = [](std::vector<Word> const& ws) {
      json out = json::array();
      for (auto const& w : ws) {
        out.push_back(format_word(w));
      }
      return out;
    };
    j["leftmost_mismatches"]      = words(r.leftmost_mismatches);
    j["position_counterexamples"] = words(r.position_counterexamples);
    return j;
  }

  [[nodiscard]] inline json to_json(CensusTable const& t) {
    json j      = document("census");
    j["d"]      = t.d;
    j["n"]      = t.n;
    j["total"]  = big(t.total);
    j["by_tau"] = json::array();
    for (auto const& [tau, c] : t.by_tau) {
      j["by_tau"].push_back({{"images", tau.images()}, {"cycles", tau.cycles()}, {"count", big(c)}});
    }
    j["by_partition"] = json::array();
    for (auto const& [p, c] : t.by_partition) {
      j["by_partition"].push_back({{"partition", to_json(p)}, {"count", big(c)}});
    }
    return j;
  }

  [[nodiscard]] inline json to_json(MomentReport const& r) {
    return {{"d", r.d},
            {"n", r.n},
            {"total", big(r.total)},
            {"moment", rational(r.moment)},
            {"moment_approx", r.moment.convert_to<double>()},
            {"limit", big(r.limit)},
            {"lower_envelope", rational(r.lower_envelope)},
            {"upper_envelope", rational(r.upper_envelope)},
            {"lower_asserted", r.lower_asserted},
            {"within_envelope", r.within_envelope()}};
  }

  [[nodiscard]] inline json to_json(std::vector<MomentReport> const& rs) {
    json j        = document("moments");
    j["moments"] = json::array();
    for (auto const& r : rs) {
      j["moments"].push_back(to_json(r));
    }
    return j;
  }

  [[nodiscard]] inline json to_json(std::size_t d, Natural n, Bounds const& b) {
    json j              = document("bounds");
    j["d"]              = d;
    j["n"]              = n;
    j["lower"]          = big(b.lower);
    j["upper"]          = big(b.upper);
    j["lower_asserted"] = b.lower_asserted;
    return j;
  }

  ////////////////////////////////////////////////////////////////////////
  // CSV
  ////////////////////////////////////////////////////////////////////////

  // RFC 4180 quoting when the field needs it.
  [[nodiscard]] inline std::string csv_field(std::string const& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
      return s;
    }
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') {
        out += '"';
      }
      out += c;
    }
    return out + '"';
  }

  [[nodiscard]] inline std::string census_csv(CensusTable const& t) {
    std::ostringstream os;
    os << "d,n,tau_cycles,count\n";
    for (auto const& [tau, c] : t.by_tau) {
      os << t.d << ',' << t.n << ',' << csv_field(tau.cycles()) << ',' << big(c) << '\n';
    }
    return os.str();
  }

  [[nodiscard]] inline std::string moments_csv(std::vector<MomentReport> const& rs) {
    std::ostringstream os;
    os << "d,n,moment_num,moment_den,lower_num,lower_den,upper_num,upper_den\n";
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    for (auto const& r : rs) {
      os << r.d << ',' << r.n << ',' << numerator(r.moment) << ',' << denominator(r.moment) << ','
         << numerator(r.lower_envelope) << ',' << denominator(r.lower_envelope) << ','
         << numerator(r.upper_envelope) << ',' << denominator(r.upper_envelope) << '\n';
    }
    return os.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Completion requests
  ////////////////////////////////////////////////////////////////////////

  struct CompletionRequest {
    enum class Mode { partition, spaced } mode = Mode::partition;
    std::size_t d = 0;
    std::vector<Sign> signs;  // may be empty in spaced mode
    PairPartition partition;  // partition mode
    Permutation tau;          // spaced mode
    std::map<std::uint32_t, Natural> known;
  };

  // {"d": 6, "signs": [1,-1,...], "partition": [[1,4],...], "known": {"1": 2, ...},
  //  "mode": "partition" | "spaced", "tau": [images...]}
  // Structural problems throw domain_error; the caller decides the exit code.
  [[nodiscard]] inline CompletionRequest parse_completion_request(json const& j) {
    CompletionRequest r;
    if (!j.is_object()) {
      throw domain_error("completion input must be a JSON object");
    }
    auto const mode = j.value("mode", std::string("partition"));
    if (mode == "partition") {
      r.mode = CompletionRequest::Mode::partition;
    } else if (mode == "spaced") {
      r.mode = CompletionRequest::Mode::spaced;
    } else {
      throw domain_error("mode must be \"partition\" or \"spaced\"");
    }
    if (!j.contains("d") || !j["d"].is_number_unsigned()) {
      throw domain_error("\"d\" must be a non-negative integer");
    }
    r.d = j["d"].get<std::size_t>();
    if (j.contains("signs")) {
      for (auto const& s : j["signs"]) {
        if (!s.is_number_integer() || (s.get<int>() != 1 && s.get<int>() != -1)) {
          throw domain_error("signs must be +1 or -1");
        }
        r.signs.push_back(s.get<int>() == 1 ? Sign::plus : Sign::minus);
      }
      if (r.signs.size() != r.d) {
        throw domain_error("\"signs\" must have d entries");
      }
    }
    if (j.contains("known")) {
      if (!j["known"].is_object()) {
        throw domain_error("\"known\" must map positions to indices");
      }
      for (auto const& [pos, idx] : j["known"].items()) {
        std::size_t at = 0;
        Natural p      = 0;
        try {
          p = detail::parse_digits(pos, at);
        } catch (parse_error const&) {
          throw domain_error("known position '" + pos + "' is not a number");
        }
        if (at != pos.size() || p == 0 || p > r.d) {
          throw domain_error("known position '" + pos + "' is out of range");
        }
        if (!idx.is_number_unsigned()) {
          throw domain_error("known index at position " + pos + " must be a non-negative integer");
        }
        r.known[static_cast<std::uint32_t>(p)] = idx.get<Natural>();
      }
    }
    if (r.mode == CompletionRequest::Mode::partition) {
      if (r.signs.empty() && r.d != 0) {
        throw domain_error("partition mode needs \"signs\"");
      }
      std::vector<Block> blocks;
      for (auto const& b : j.at("partition")) {
        if (!b.is_array() || b.size() != 2 || !b[0].is_number_unsigned() || !b[1].is_number_unsigned()) {
          throw domain_error("partition blocks must be pairs of positions");
        }
        blocks.emplace_back(b[0].get<std::uint32_t>(), b[1].get<std::uint32_t>());
      }
      r.partition = PairPartition(std::move(blocks));
      if (r.partition.size() != r.d) {
        throw domain_error("partition does not cover 1..d");
      }
    } else {
      r.tau = Permutation(j.at("tau").get<std::vector<std::uint32_t>>());
      if (r.tau.size() != r.d) {
        throw domain_error("\"tau\" must have d entries");
      }
    }
    return r;
  }

  [[nodiscard]] inline Word complete(CompletionRequest const& r) {
    if (r.mode == CompletionRequest::Mode::partition) {
      PartialWord p;
      p.signs = r.signs;
      p.indices.assign(r.d, std::nullopt);
      for (auto const& [pos, idx] : r.known) {
        p.indices[pos - 1] = idx;
      }
      return complete_from_partition(p, r.partition);
    }
    if (!r.signs.empty() && r.signs != spaced_signs(r.tau)) {
      throw inconsistent_data("signs contradict the sign rule forced by tau");
    }
    return complete_from_spaced(r.tau, r.known);
  }

}  // namespace thompson_clt::io
