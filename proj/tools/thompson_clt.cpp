// Command-line front end. Exit codes: 0 success, 1 budget or internal
// failure, 2 malformed input or usage, 3 semantic rejection (non-neutral
// word, inconsistent completion data, invalid parameters).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thompson_clt/thompson_clt.hpp"

namespace tc = thompson_clt;
using tc::io::json;

namespace {

  enum exit_code : int { ok = 0, resource = 1, syntax = 2, semantic = 3 };

  // Thrown for malformed input that is not word text.
  struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
  };

  struct Config {
    std::string format = "text";
    std::string out;
    bool verbose = false;

    std::string word_text;
    std::string file;
    std::string strategy = "leftmost";
    std::string kind     = "separate";
    std::size_t position = 0;

    std::size_t d = 0;
    std::vector<tc::Natural> n;
    std::size_t max_len    = 3;
    tc::Natural max_index  = 6;
    std::size_t reach_cap  = 1'000'000;
    std::uint64_t budget_candidates = tc::default_budget_candidates;
    std::uint64_t budget_halfwords  = tc::default_budget_halfwords;
    bool verify_odd = false;
  };

  std::string slurp(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }

  // Positional text wins; otherwise --file; otherwise stdin.
  std::string input_text(Config const& cfg, bool positional_given) {
    if (positional_given) {
      return cfg.word_text;
    }
    if (!cfg.file.empty()) {
      std::ifstream f(cfg.file);
      if (!f) {
        throw usage_error("cannot read " + cfg.file);
      }
      return slurp(f);
    }
    return slurp(std::cin);
  }

  // Word files may end with a newline; the grammar itself has none.
  tc::Word read_word(Config const& cfg, bool positional_given) {
    std::string text = input_text(cfg, positional_given);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
      text.pop_back();
    }
    return tc::parse_word(text);
  }

  void emit(Config const& cfg, std::string const& body) {
    if (cfg.out.empty()) {
      std::cout << body;
      return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      throw usage_error("cannot write " + cfg.out);
    }
    f << body;
  }

  std::string dump(json const& j) {
    return j.dump(2) + "\n";
  }

  void require_format(Config const& cfg, std::initializer_list<char const*> allowed) {
    for (auto const* f : allowed) {
      if (cfg.format == f) {
        return;
      }
    }
    throw usage_error("format '" + cfg.format + "' is not available for this subcommand");
  }

  std::string join_positions(std::vector<std::size_t> const& v) {
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      out += (k ? " " : "") + std::to_string(v[k]);
    }
    return out;
  }

  std::string images_line(tc::Permutation const& t) {
    std::string out = "[";
    for (std::size_t k = 0; k < t.size(); ++k) {
      out += (k ? "," : "") + std::to_string(t.images()[k]);
    }
    return out + "]";
  }

  std::string tagged(tc::TaggedLetter const& t) {
    return tc::format_letter(t.letter) + "@" + std::to_string(t.origin);
  }

  std::string approx(tc::BigRational const& q) {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed << q.convert_to<double>();
    return os.str();
  }

  tc::CensusOptions census_options(Config const& cfg) {
    return {cfg.budget_candidates, cfg.budget_halfwords, 0, cfg.verify_odd};
  }

  tc::Natural single_n(Config const& cfg) {
    if (cfg.n.size() != 1) {
      throw usage_error("--n takes exactly one value for this subcommand");
    }
    return cfg.n.front();
  }

  int run(int argc, char** argv) {
    CLI::App app{"Rewriting, binning and census tools for neutral words in Thompson's group F"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out, "Write output to this file instead of stdout");
    app.add_flag("--verbose", cfg.verbose, "Include full traces and details");

    auto add_word = [&cfg](CLI::App* sub) {
      sub->add_option("word", cfg.word_text, "Word text, e.g. \"g3^-1 g6\" or \"3- 6+\"");
      sub->add_option("--file", cfg.file, "Read the word from a file");
    };
    auto add_budgets = [&cfg](CLI::App* sub) {
      sub->add_option("--budget-candidates", cfg.budget_candidates, "Naive enumeration limit")
          ->check(CLI::PositiveNumber);
      sub->add_option("--budget-halfwords", cfg.budget_halfwords, "Meet-in-the-middle table limit")
          ->check(CLI::PositiveNumber);
      sub->add_flag("--verify-odd", cfg.verify_odd, "Enumerate odd d instead of short-circuiting");
    };

    auto* normalize = app.add_subcommand("normalize", "Normal form under the composed reduction");
    add_word(normalize);
    normalize->add_option("--strategy", cfg.strategy)->check(CLI::IsMember({"leftmost", "rightmost"}));

    auto* tau = app.add_subcommand("tau", "Permutation from original to normal-form positions");
    add_word(tau);

    auto* partition = app.add_subcommand("partition", "Pair partition of a neutral word");
    add_word(partition);

    auto* redexes = app.add_subcommand("redexes", "Redex positions of one reduction");
    add_word(redexes);
    redexes->add_option("--kind", cfg.kind)
        ->check(CLI::IsMember({"separate", "order", "push-smallest"}));

    auto* step = app.add_subcommand("step", "Contract one redex");
    add_word(step);
    step->add_option("--kind", cfg.kind)->check(CLI::IsMember({"separate", "order", "push-smallest"}));
    step->add_option("--position", cfg.position, "1-based redex position")->required();

    auto* eval = app.add_subcommand("eval", "Piecewise-linear map of a word");
    add_word(eval);

    auto* complete = app.add_subcommand("complete", "Fill in inverse indices of a neutral word");
    complete->add_option("request", cfg.word_text, "Completion request as inline JSON");
    complete->add_option("--file", cfg.file, "Read the request from a file");

    auto* relations = app.add_subcommand("verify-relations", "Check g_n g_k = g_k g_(n+1) on PL maps");
    relations->add_option("--max-index", cfg.max_index)->capture_default_str();

    auto* enumerate = app.add_subcommand("enumerate", "List neutral words naively");
    enumerate->add_option("--d", cfg.d)->required();
    enumerate->add_option("--n", cfg.n)->required();
    add_budgets(enumerate);

    auto* census = app.add_subcommand("census", "Counts of neutral words by permutation");
    census->add_option("--d", cfg.d)->required();
    census->add_option("--n", cfg.n)->required();
    add_budgets(census);

    auto* moments = app.add_subcommand("moments", "Exact moments with their envelopes");
    moments->add_option("--d", cfg.d)->required();
    moments->add_option("--n", cfg.n, "One or more n, comma separated")->required()->delimiter(',');
    add_budgets(moments);

    auto* bounds = app.add_subcommand("bounds", "Binomial bounds on each N(d, n, tau)");
    bounds->add_option("--d", cfg.d)->required();
    bounds->add_option("--n", cfg.n)->required();

    auto* confluence = app.add_subcommand("confluence", "Exhaustive local confluence check");
    confluence->add_option("--kind", cfg.kind)
        ->check(CLI::IsMember({"separate", "order", "push-smallest"}));
    confluence->add_option("--max-len", cfg.max_len)->capture_default_str();
    confluence->add_option("--max-index", cfg.max_index)->capture_default_str();
    confluence->add_option("--reachable-cap", cfg.reach_cap)->check(CLI::PositiveNumber);

    auto* unique = app.add_subcommand("unique-nf", "Explore every reduction order");
    unique->add_option("--max-len", cfg.max_len)->capture_default_str();
    unique->add_option("--max-index", cfg.max_index)->capture_default_str();

    try {
      app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
      int const code = app.exit(e);
      return code == 0 ? ok : syntax;
    }

    auto given = [](CLI::App* sub, char const* name) { return sub->count(name) > 0; };
    bool const text = cfg.format == "text";

    if (normalize->parsed()) {
      require_format(cfg, {"text", "json"});
      tc::Word const w = read_word(cfg, given(normalize, "word"));
      auto const r
          = tc::normalize(w, cfg.strategy == "leftmost" ? tc::Strategy::leftmost : tc::Strategy::rightmost);
      if (!text) {
        emit(cfg, dump(tc::io::to_json(w, r, cfg.verbose)));
        return ok;
      }
      std::string body = tc::format_word(tc::strip(r.word)) + "\n";
      if (cfg.verbose) {
        for (auto const& s : r.trace) {
          body += tc::to_string(s.kind) + " at " + std::to_string(s.position) + ": " + tagged(s.before[0])
                  + " " + tagged(s.before[1]) + " -> " + tagged(s.after[0]) + " " + tagged(s.after[1]) + "\n";
        }
        body += std::to_string(r.trace.size()) + " steps\n";
      }
      emit(cfg, body);
      return ok;
    }

    if (tau->parsed()) {
      require_format(cfg, {"text", "json"});
      tc::Word const w     = read_word(cfg, given(tau, "word"));
      tc::Permutation const t = tc::tau_of(w);
      if (!text) {
        json j    = tc::io::document("tau");
        j["word"] = tc::format_word(w);
        j.update(tc::io::to_json(t));
        emit(cfg, dump(j));
      } else {
        emit(cfg, images_line(t) + "\n" + t.cycles() + "\n");
      }
      return ok;
    }

    if (partition->parsed()) {
      require_format(cfg, {"text", "json"});
      tc::Word const w = read_word(cfg, given(partition, "word"));
      auto const p     = tc::partition_of(w);
      if (!text) {
        json j         = tc::io::document("partition");
        j["word"]      = tc::format_word(w);
        j["partition"] = tc::io::to_json(p);
        emit(cfg, dump(j));
      } else {
        emit(cfg, p.to_string() + "\n");
      }
      return ok;
    }

    if (redexes->parsed() || step->parsed()) {
      require_format(cfg, {"text", "json"});
      bool const is_step   = step->parsed();
      tc::Word const w     = read_word(cfg, given(is_step ? step : redexes, "word"));
      auto const kind      = tc::parse_reduction_kind(cfg.kind);
      if (!is_step) {
        auto const pos = tc::redexes(w, kind);
        if (!text) {
          json j         = tc::io::document("redexes");
          j["word"]      = tc::format_word(w);
          j["kind"]      = tc::to_string(kind);
          j["positions"] = pos;
          emit(cfg, dump(j));
        } else {
          emit(cfg, join_positions(pos) + "\n");
        }
        return ok;
      }
      tc::Word const out = tc::strip(tc::step(tc::tag(w), kind, cfg.position));
      if (!text) {
        json j        = tc::io::document("step");
        j["word"]     = tc::format_word(w);
        j["kind"]     = tc::to_string(kind);
        j["position"] = cfg.position;
        j["result"]   = tc::format_word(out);
        emit(cfg, dump(j));
      } else {
        emit(cfg, tc::format_word(out) + "\n");
      }
      return ok;
    }

    if (eval->parsed()) {
      require_format(cfg, {"text", "json"});
      tc::Word const w = read_word(cfg, given(eval, "word"));
      tc::PLMap const f = tc::eval_word(w);
      if (!text) {
        json j = tc::io::to_json(f);
        j["word"] = tc::format_word(w);
        emit(cfg, dump(j));
        return ok;
      }
      std::string body;
      for (std::size_t k = 0; k < f.breakpoints().size(); ++k) {
        body += f.breakpoints()[k].to_string() + " -> " + f.values()[k].to_string() + "\n";
      }
      body += f.is_identity() ? "identity\n" : "not the identity\n";
      emit(cfg, body);
      return ok;
    }

    if (complete->parsed()) {
      require_format(cfg, {"text", "json"});
      std::string const raw = input_text(cfg, given(complete, "request"));
      tc::io::CompletionRequest req;
      try {
        req = tc::io::parse_completion_request(json::parse(raw));
      } catch (json::exception const& e) {
        throw usage_error(std::string("bad completion request: ") + e.what());
      } catch (tc::domain_error const& e) {
        throw usage_error(std::string("bad completion request: ") + e.what());
      }
      tc::Word const w = tc::io::complete(req);
      if (!tc::is_neutral(w)) {
        throw tc::internal_error("completion is not neutral");
      }
      if (!text) {
        json j    = tc::io::document("complete");
        j["mode"] = req.mode == tc::io::CompletionRequest::Mode::partition ? "partition" : "spaced";
        j["d"]    = req.d;
        j["word"] = tc::format_word(w);
        emit(cfg, dump(j));
      } else {
        emit(cfg, tc::format_word(w) + "\n");
      }
      return ok;
    }

    if (relations->parsed()) {
      require_format(cfg, {"text", "json"});
      auto const r = tc::verify_relations(cfg.max_index);
      if (!text) {
        emit(cfg, dump(tc::io::to_json(r)));
      } else {
        std::string body = std::to_string(r.checks.size()) + " relations checked, "
                           + std::to_string(r.failures().size()) + " failures\n";
        for (auto const& c : r.failures()) {
          body += "fails: n=" + std::to_string(c.n) + " k=" + std::to_string(c.k) + "\n";
        }
        emit(cfg, body);
      }
      return r.all_pass() ? ok : resource;
    }

    if (enumerate->parsed()) {
      require_format(cfg, {"text", "json"});
      tc::Natural const n = single_n(cfg);
      auto const words    = tc::enumerate_naive(cfg.d, n, cfg.budget_candidates, cfg.verify_odd);
      if (!text) {
        json j     = tc::io::document("enumerate");
        j["d"]     = cfg.d;
        j["n"]     = n;
        j["count"] = words.size();
        j["words"] = json::array();
        for (auto const& w : words) {
          j["words"].push_back(tc::format_word(w));
        }
        emit(cfg, dump(j));
      } else {
        std::string body;
        for (auto const& w : words) {
          body += tc::format_word(w) + "\n";
        }
        emit(cfg, body);
      }
      return ok;
    }

    if (census->parsed()) {
      tc::Natural const n = single_n(cfg);
      auto const table    = tc::census(cfg.d, n, census_options(cfg));
      if (cfg.format == "json") {
        emit(cfg, dump(tc::io::to_json(table)));
      } else if (cfg.format == "csv") {
        emit(cfg, tc::io::census_csv(table));
      } else {
        std::string body = "d=" + std::to_string(cfg.d) + " n=" + std::to_string(n)
                           + " total=" + table.total.str() + "\n";
        for (auto const& [t, c] : table.by_tau) {
          body += t.cycles() + " " + c.str() + "\n";
        }
        if (cfg.verbose) {
          for (auto const& [p, c] : table.by_partition) {
            body += p.to_string() + " " + c.str() + "\n";
          }
        }
        emit(cfg, body);
      }
      return ok;
    }

    if (moments->parsed()) {
      std::vector<tc::MomentReport> reports;
      for (auto n : cfg.n) {
        reports.push_back(tc::moment(cfg.d, n, census_options(cfg)));
      }
      if (cfg.format == "json") {
        emit(cfg, dump(tc::io::to_json(reports)));
      } else if (cfg.format == "csv") {
        emit(cfg, tc::io::moments_csv(reports));
      } else {
        std::string body;
        for (auto const& r : reports) {
          body += "d=" + std::to_string(r.d) + " n=" + std::to_string(r.n) + " moment "
                  + r.moment.str() + " (approx " + approx(r.moment) + ", limit " + r.limit.str()
                  + ") envelope [" + approx(r.lower_envelope) + ", " + approx(r.upper_envelope) + "]"
                  + (r.lower_asserted ? "" : " lower not asserted") + "\n";
        }
        emit(cfg, body);
      }
      return ok;
    }

    if (bounds->parsed()) {
      require_format(cfg, {"text", "json"});
      tc::Natural const n = single_n(cfg);
      auto const b        = tc::sandwich_bounds(cfg.d, n);
      if (!text) {
        emit(cfg, dump(tc::io::to_json(cfg.d, n, b)));
      } else {
        emit(cfg, b.lower.str() + " " + b.upper.str()
                      + (b.lower_asserted ? "\n" : "\nlower bound not asserted: n <= 3d(d-1)/2\n"));
      }
      return ok;
    }

    if (confluence->parsed()) {
      require_format(cfg, {"text", "json"});
      auto const r = tc::check_local_confluence(tc::parse_reduction_kind(cfg.kind), cfg.max_len,
                                                cfg.max_index, cfg.reach_cap);
      if (!text) {
        emit(cfg, dump(tc::io::to_json(r)));
      } else {
        std::string body = tc::to_string(r.kind) + " max_len=" + std::to_string(r.max_len)
                           + " max_index=" + std::to_string(r.max_index) + ": "
                           + std::to_string(r.words_checked) + " words, " + std::to_string(r.peaks_checked)
                           + " peaks (" + std::to_string(r.overlapping_peaks) + " overlapping), "
                           + std::to_string(r.counterexamples.size()) + " counterexamples"
                           + (r.cap_hit ? ", reachable-set cap hit" : "") + "\n";
        for (auto const& c : r.counterexamples) {
          body += tc::format_word(c.word) + " at " + std::to_string(c.first_position) + "/"
                  + std::to_string(c.second_position) + "\n";
        }
        emit(cfg, body);
      }
      return ok;
    }

    if (unique->parsed()) {
      require_format(cfg, {"text", "json"});
      auto const r = tc::check_unique_normal_form(cfg.max_len, cfg.max_index);
      if (!text) {
        emit(cfg, dump(tc::io::to_json(r)));
      } else {
        emit(cfg, "max_len=" + std::to_string(r.max_len) + " max_index=" + std::to_string(r.max_index)
                      + ": " + std::to_string(r.words_checked) + " words, "
                      + std::to_string(r.states_explored) + " states, "
                      + std::to_string(r.counterexamples.size()) + " counterexamples, "
                      + std::to_string(r.leftmost_mismatches.size()) + " leftmost mismatches, "
                      + std::to_string(r.position_counterexamples.size()) + " position counterexamples\n");
      }
      return ok;
    }
    return syntax;
  }

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (tc::parse_error const& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return syntax;
  } catch (tc::overflow_error const& e) {
    std::cerr << "overflow: " << e.what() << "\n";
    return syntax;
  } catch (usage_error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return syntax;
  } catch (tc::budget_error const& e) {
    std::cerr << e.what() << "\n";
    return resource;
  } catch (tc::internal_error const& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return resource;
  } catch (tc::not_neutral const& e) {
    std::cerr << "not neutral: " << e.what() << "\n";
    return semantic;
  } catch (tc::inconsistent_data const& e) {
    std::cerr << "inconsistent data: " << e.what() << "\n";
    return semantic;
  } catch (tc::error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return semantic;
  } catch (std::exception const& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return resource;
  }
}
