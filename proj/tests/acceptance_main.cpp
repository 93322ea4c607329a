// Acceptance suite. Each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails.
//
// Usage: acceptance_tests <cli-binary> <data-dir> <scratch-dir>

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "helpers.hpp"
#include "lda.hpp"
#include "mp_rank.hpp"
#include "oracles.hpp"
#include "rdf.hpp"
#include "util.hpp"

using namespace entsum;
using namespace entsum::test;

namespace {

std::string g_cli;
std::string g_data;
std::filesystem::path g_scratch;

struct Check {
  bool ok = true;
  std::size_t failures = 0;
  std::string first;

  void expect(bool condition, const std::string& message) {
    if (condition) return;
    ok = false;
    ++failures;
    if (first.empty()) first = message;
  }
};

struct CriterionResult {
  bool passed;
  double seconds;
  std::string detail;
};

bool run_criterion(const std::string& name, double budget_seconds,
                   const std::function<void(Check&)>& body) {
  Check check;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("unexpected exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0) {
    check.expect(seconds < budget_seconds,
                 "runtime " + std::to_string(seconds) + "s exceeds budget " +
                     std::to_string(budget_seconds) + "s");
  }
  std::ostringstream line;
  line << (check.ok ? "PASS" : "FAIL") << ' ' << name << " (" << std::fixed
       << std::setprecision(2) << seconds << "s)";
  if (!check.ok) line << " [" << check.failures << " failed: " << check.first << "]";
  std::cout << line.str() << std::endl;
  return check.ok;
}

int run_command(const std::string& command) {
  const int rc = std::system(command.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/* ------------------------------------------------------------------ */
/* 1. Parser conformance                                                */

struct LineSpec {
  std::string text;
  enum { kTriple, kSkip, kError } verdict;
  std::string subject, predicate;  // for kTriple
  RdfTerm object;
};

std::vector<LineSpec> parser_fixture() {
  const auto triple = [](std::string text, std::string s, std::string p, RdfTerm o) {
    return LineSpec{std::move(text), LineSpec::kTriple, std::move(s), std::move(p), std::move(o)};
  };
  const auto skip = [](std::string text) {
    return LineSpec{std::move(text), LineSpec::kSkip, {}, {}, {}};
  };
  const auto error = [](std::string text) {
    return LineSpec{std::move(text), LineSpec::kError, {}, {}, {}};
  };
  return {
      skip("# full-line comment"),
      skip(""),
      triple("<http://x/s1> <http://x/p> <http://x/o1> .", "http://x/s1", "http://x/p",
             iri("http://x/o1")),
      triple("<http://x/s1> <http://x/p> \"plain\" .", "http://x/s1", "http://x/p", lit("plain")),
      triple("<http://x/s1> <http://x/p2> \"hello\"@en .", "http://x/s1", "http://x/p2",
             lit("hello")),
      triple("<http://x/s1> <http://x/p2> \"42\"^^<http://www.w3.org/2001/XMLSchema#integer> .",
             "http://x/s1", "http://x/p2", lit("42")),
      triple("   <http://x/s2> <http://x/p> <http://x/o2> .", "http://x/s2", "http://x/p",
             iri("http://x/o2")),
      triple("<http://x/s2> <http://x/p> \"tab\\there\" .", "http://x/s2", "http://x/p",
             lit("tab\there")),
      triple("<http://x/s2> <http://x/p> \"quote \\\" inside\" .", "http://x/s2", "http://x/p",
             lit("quote \" inside")),
      triple("<http://x/s2> <http://x/p> \"backslash \\\\\" .", "http://x/s2", "http://x/p",
             lit("backslash \\")),
      triple("<http://x/s3> <http://x/p> \"caf\\u00e9\" .", "http://x/s3", "http://x/p",
             lit("caf\xc3\xa9")),
      triple("<http://x/s3> <http://x/p> \"\" .", "http://x/s3", "http://x/p", lit("")),
      triple("<http://x/s3> <http://x/p> \"multi word value\" .", "http://x/s3", "http://x/p",
             lit("multi word value")),
      triple("<http://x/s3> <http://x/p#frag> <http://x/o#frag> .", "http://x/s3",
             "http://x/p#frag", iri("http://x/o#frag")),
      skip("  # indented comment"),
      triple("<http://x/s4> <http://x/p> \"v\"@en-US .", "http://x/s4", "http://x/p", lit("v")),
      triple("<http://x/s4> <http://x/p> <http://x/o> .  ", "http://x/s4", "http://x/p",
             iri("http://x/o")),
      triple("<http://x/s4> <http://x/q> \"unicode \xc3\xa9 direct\" .", "http://x/s4",
             "http://x/q", lit("unicode \xc3\xa9 direct")),
      error("_:b1 <http://x/p> \"v\" ."),
      error("<http://x/s> <http://x/p> _:b2 ."),
      error("<http://x/s> <http://x/p> \"v\""),
      error("<http://x/s> <http://x/p> ."),
      error("<http://x/s> \"lit\" <http://x/o> ."),
      error("<http://x/s> <http://x/p> \"unterminated ."),
      error("<http://x/s> <http://x/p> <bad iri> ."),
      error("<http://x/s> <http://x/p> \"v\" . extra"),
      error("just nonsense"),
      error("<http://x/s> <http://x/p> \"v\"^^int ."),
      error("<> <http://x/p> \"v\" ."),
      error("<http://x/s> <http://x/p> \"bad \\q escape\" ."),
  };
}

void criterion_parser(Check& check) {
  const auto fixture = parser_fixture();
  check.expect(fixture.size() == 30, "fixture must have 30 lines");

  // per-line verdicts
  for (std::size_t i = 0; i < fixture.size(); ++i) {
    const LineSpec& spec = fixture[i];
    const std::string tag = "line " + std::to_string(i + 1) + ": " + spec.text;
    try {
      const auto triples = parse_ntriples(spec.text + "\n");
      if (spec.verdict == LineSpec::kError) {
        check.expect(false, tag + " should have been rejected");
      } else if (spec.verdict == LineSpec::kSkip) {
        check.expect(triples.empty(), tag + " should parse to nothing");
      } else {
        check.expect(triples.size() == 1, tag + " should yield one triple");
        if (triples.size() == 1) {
          check.expect(triples[0].subject == spec.subject, tag + ": wrong subject");
          check.expect(triples[0].predicate == spec.predicate, tag + ": wrong predicate");
          check.expect(triples[0].object == spec.object, tag + ": wrong object");
        }
      }
    } catch (const Error& e) {
      check.expect(spec.verdict == LineSpec::kError,
                   tag + " unexpectedly rejected: " + e.what());
      if (spec.verdict == LineSpec::kError) {
        check.expect(e.code() == errc::malformed_line, tag + ": wrong error kind");
      }
    }
  }

  // the valid subset parses as a whole file, in order
  std::string valid_text;
  std::size_t expected_triples = 0;
  for (const LineSpec& spec : fixture) {
    if (spec.verdict != LineSpec::kError) {
      valid_text += spec.text;
      valid_text += '\n';
      expected_triples += spec.verdict == LineSpec::kTriple ? 1 : 0;
    }
  }
  const auto parsed = parse_ntriples(valid_text);
  check.expect(parsed.size() == expected_triples, "whole-file parse count mismatch");

  // a malformed line is reported with its physical line number
  std::string broken = valid_text + "broken line\n";
  try {
    parse_ntriples(broken);
    check.expect(false, "malformed suffix not rejected");
  } catch (const Error& e) {
    const std::string want = "line " + std::to_string(19);  // 18 valid lines + 1
    check.expect(std::string(e.what()).find(want) != std::string::npos,
                 std::string("wrong line number in: ") + e.what());
  }

  // round-trip serialization is byte-stable
  const std::string first = serialize_ntriples(parsed);
  const auto reparsed = parse_ntriples(first);
  const std::string second = serialize_ntriples(reparsed);
  check.expect(first == second, "round-trip serialization changed bytes");
  check.expect(reparsed.size() == parsed.size(), "round-trip changed triple count");
  for (std::size_t i = 0; i < std::min(parsed.size(), reparsed.size()); ++i) {
    check.expect(reparsed[i].subject == parsed[i].subject &&
                     reparsed[i].predicate == parsed[i].predicate &&
                     reparsed[i].object == parsed[i].object,
                 "round-trip changed triple " + std::to_string(i));
  }
}

/* ------------------------------------------------------------------ */
/* 2. Normalizer                                                        */

void criterion_normalizer(Check& check) {
  check.expect(normalize_iri("http://dbpedia.org/ontology/Broadcaster") == "broadcaster",
               "headline IRI case failed");

  const std::vector<std::pair<RdfTerm, std::string>> cases = {
      {iri("http://x/ns#Type"), "type"},
      {iri("http://x/path/To/Thing"), "thing"},
      {iri("http://x/a#b#C"), "c"},
      {iri("http://x/A/B#C/D"), "c/d"},
      {iri("urn:isbn:0451450523"), "urn:isbn:0451450523"},
      {iri("http://x/UPPER"), "upper"},
      {iri("http://x/MiXeD_case-123"), "mixed_case-123"},
      {iri("http://x/p%20q"), "p%20q"},
      {iri("http://x/r\xc3\xa9sum\xc3\xa9"), "r\xc3\xa9sum\xc3\xa9"},
      {iri("http://dbpedia.org/resource/Category:Radio"), "category:radio"},
      {lit("Hello"), "hello"},
      {lit("  Leading"), "leading"},
      {lit("Trailing   "), "trailing"},
      {lit("Multi   Space"), "multi space"},
      {lit("Tab\tand\nnewline"), "tab and newline"},
      {lit("MiXeD CaSe"), "mixed case"},
      {lit("No.1"), "no.1"},
      {lit("A"), "a"},
      {lit("1987"), "1987"},
      {lit(" \xc3\xa9 \xc3\x9c "), "\xc3\xa9 \xc3\x9c"},
  };
  check.expect(cases.size() == 20, "need 20 additional cases");
  for (const auto& [term, expected] : cases) {
    std::string got;
    try {
      got = normalize_term(term);
    } catch (const Error& e) {
      check.expect(false, term.lexical + " raised: " + e.what());
      continue;
    }
    check.expect(got == expected, term.lexical + " -> '" + got + "', wanted '" + expected + "'");
  }

  for (const char* degenerate : {"http://x/", "http://x/page#"}) {
    try {
      normalize_iri(degenerate);
      check.expect(false, std::string(degenerate) + " should raise");
    } catch (const Error& e) {
      check.expect(e.code() == errc::empty_token, "wrong error for degenerate IRI");
    }
  }
}

/* ------------------------------------------------------------------ */
/* Synthetic corpora: mixture-generated documents with K predicates.    */

struct TrueModel {
  std::vector<std::vector<double>> phi;    // K x V
  std::vector<std::vector<double>> theta;  // E x K
};

TrueModel separated_model(std::size_t K, std::size_t V, std::size_t E, double own_mass = 0.95) {
  TrueModel truth;
  truth.phi.assign(K, std::vector<double>(V, 0.0));
  const std::size_t span = V / K;
  for (std::size_t k = 0; k < K; ++k) {
    const std::size_t begin = k * span;
    const std::size_t end = (k + 1 == K) ? V : begin + span;
    for (std::size_t w = begin; w < end; ++w) truth.phi[k][w] = 1.0 / (end - begin);
  }
  truth.theta.assign(E, std::vector<double>(K, (1.0 - own_mass) / (K - 1 == 0 ? 1 : K - 1)));
  for (std::size_t d = 0; d < E; ++d) {
    if (K == 1) {
      truth.theta[d][0] = 1.0;
    } else {
      truth.theta[d][d % K] = own_mass;
    }
  }
  return truth;
}

std::size_t draw(Rng& rng, const std::vector<double>& probabilities) {
  double u = rng.uniform01();
  for (std::size_t i = 0; i + 1 < probabilities.size(); ++i) {
    u -= probabilities[i];
    if (u < 0.0) return i;
  }
  return probabilities.size() - 1;
}

Corpus sample_corpus(const TrueModel& truth, std::size_t tokens_per_doc, std::uint64_t seed) {
  const std::size_t K = truth.phi.size();
  const std::size_t E = truth.theta.size();
  Rng rng(seed);
  std::vector<Triple> triples;
  for (std::size_t d = 0; d < E; ++d) {
    const std::string subject = "http://x/doc" + std::to_string(d);
    for (std::size_t i = 0; i < tokens_per_doc; ++i) {
      const std::size_t topic = draw(rng, truth.theta[d]);
      const std::size_t word = draw(rng, truth.phi[topic]);
      Triple t = make_triple(subject, "http://x/p" + std::to_string(i % K),
                             lit("w" + std::to_string(word)));
      triples.push_back(std::move(t));
    }
  }
  return corpus_from(triples);
}

/* ------------------------------------------------------------------ */
/* 3. Sampler invariants                                                */

void check_sampler_on(Check& check, const std::string& label, const Corpus& corpus,
                      bool weighted) {
  HyperParams params = default_hyperparams(corpus, BetaMode::fixed_001);

  std::optional<TfidfWeights> weights;
  TrainOptions options;
  if (weighted) {
    weights.emplace(corpus);
    options.weights = &*weights;
  }

  std::size_t sweeps = 0;
  options.on_sweep = [&](std::uint32_t, const GibbsCounts& counts) {
    ++sweeps;
    for (std::size_t d = 0; d < corpus.entity_count(); ++d) {
      const double diff = std::fabs(counts.doc_topic.row_sum(d) - counts.doc_total[d]);
      check.expect(diff <= 1e-9 * (1.0 + std::fabs(counts.doc_total[d])),
                   label + ": document counts drifted by " + std::to_string(diff));
    }
    for (std::size_t k = 0; k < corpus.topic_count(); ++k) {
      const double diff = std::fabs(counts.topic_word.row_sum(k) - counts.topic_total[k]);
      check.expect(diff <= 1e-9 * (1.0 + std::fabs(counts.topic_total[k])),
                   label + ": topic counts drifted by " + std::to_string(diff));
    }
  };

  std::vector<double> ll_trace;
  options.ll_interval = 1;
  options.on_ll = [&](std::uint32_t, double ll) { ll_trace.push_back(ll); };

  const LdaModel model = gibbs_train(corpus, params, options);
  check.expect(sweeps == params.iterations, label + ": observer missed sweeps");

  for (std::size_t d = 0; d < model.theta.rows(); ++d) {
    check.expect(std::fabs(model.theta.row_sum(d) - 1.0) <= 1e-9, label + ": theta row sum");
    for (std::size_t k = 0; k < model.theta.cols(); ++k) {
      check.expect(model.theta(d, k) > 0.0, label + ": theta entry not positive");
    }
  }
  for (std::size_t k = 0; k < model.phi.rows(); ++k) {
    check.expect(std::fabs(model.phi.row_sum(k) - 1.0) <= 1e-9, label + ": phi row sum");
    for (std::size_t w = 0; w < model.phi.cols(); ++w) {
      check.expect(model.phi(k, w) > 0.0, label + ": phi entry not positive");
    }
  }

  // bit-identical rerun
  TrainOptions quiet;
  if (weighted) quiet.weights = &*weights;
  const LdaModel again = gibbs_train(corpus, params, quiet);
  check.expect(again.theta == model.theta && again.phi == model.phi &&
                   again.assignments == model.assignments,
               label + ": rerun with the same seed differs");

  // log-likelihood trend over deciles
  const std::size_t decile = params.iterations / 10;
  double head = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < decile; ++i) {
    head += ll_trace[i];
    tail += ll_trace[ll_trace.size() - 1 - i];
  }
  check.expect(tail / decile >= head / decile, label + ": log-likelihood did not improve");
}

void criterion_sampler(Check& check) {
  const struct {
    std::size_t K, V, E, tokens;
    std::uint64_t seed;
  } configs[] = {
      {2, 12, 10, 30, 7},
      {5, 30, 25, 40, 8},
      {9, 50, 40, 50, 9},
  };
  for (const auto& cfg : configs) {
    const TrueModel truth = separated_model(cfg.K, cfg.V, cfg.E);
    const Corpus corpus = sample_corpus(truth, cfg.tokens, cfg.seed);
    check.expect(corpus.topic_count() == cfg.K, "synthetic corpus lost predicates");
    check.expect(corpus.vocab_size() <= cfg.V, "synthetic corpus vocabulary overflow");
    const std::string label =
        "K=" + std::to_string(cfg.K) + ",V=" + std::to_string(cfg.V) + ",E=" + std::to_string(cfg.E);
    check_sampler_on(check, label, corpus, false);
  }
  // weighted counts on the middle configuration
  const TrueModel truth = separated_model(5, 30, 25);
  check_sampler_on(check, "K=5 weighted", sample_corpus(truth, 40, 8), true);
}

/* ------------------------------------------------------------------ */
/* 4. Topic recovery                                                    */

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

void criterion_recovery(Check& check) {
  const std::size_t K = 5, V = 50, E = 40;
  const TrueModel truth = separated_model(K, V, E);
  const Corpus corpus = sample_corpus(truth, 80, 17);
  check.expect(corpus.topic_count() == K, "expected K topics");

  HyperParams params = default_hyperparams(corpus, BetaMode::fixed_001);
  params.iterations = 600;
  params.burn_in = 100;
  const LdaModel model = gibbs_train(corpus, params);

  // learned rows over the true vocabulary order
  std::vector<std::vector<double>> learned(K, std::vector<double>(V, 0.0));
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t w = 0; w < V; ++w) {
      const auto id = corpus.object_id("w" + std::to_string(w));
      if (id) learned[k][w] = model.phi(k, *id);
    }
  }

  std::vector<bool> used_model(K, false), used_truth(K, false);
  double total = 0.0;
  for (std::size_t step = 0; step < K; ++step) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < K; ++i) {
      if (used_model[i]) continue;
      for (std::size_t j = 0; j < K; ++j) {
        if (used_truth[j]) continue;
        const double c = cosine(learned[i], truth.phi[j]);
        if (c > best) {
          best = c;
          bi = i;
          bj = j;
        }
      }
    }
    used_model[bi] = used_truth[bj] = true;
    total += best;
  }
  const double mean = total / K;
  check.expect(mean >= 0.9, "greedy-matched mean cosine " + std::to_string(mean) + " < 0.9");
}

/* ------------------------------------------------------------------ */
/* 5. MP oracle equivalence                                             */

// Restricted growth strings: canonical label sequences of a given length
// using at most max_labels distinct labels.
void enumerate_rgs(std::size_t length, int max_labels, std::vector<std::vector<int>>& out) {
  std::vector<int> cur(length);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int used) {
    if (pos == length) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= used && v < max_labels; ++v) {
      cur[pos] = v;
      rec(pos + 1, v == used ? used + 1 : used);
    }
  };
  rec(0, 0);
}

EntityDocument document_from(const std::vector<TokenTriple>& pairs) {
  std::vector<std::pair<std::string, std::string>> as_strings(pairs.begin(), pairs.end());
  return build_documents(subject_triples("http://x/e", as_strings)).at(0);
}

bool equal_result(const EntityDocument& doc, const RankedSummary& got,
                  const MpOracleResult& expected) {
  if (got.ordered_triples.size() != expected.order.size()) return false;
  for (std::size_t i = 0; i < expected.order.size(); ++i) {
    if (got.ordered_triples[i].doc_order != expected.order[i]) return false;
    if (static_cast<int>(got.phase_tags[i]) != expected.phases[i]) return false;
  }
  return true;
}

void criterion_mp_oracle(Check& check) {
  // exhaustive part: canonical documents up to 6 triples over up to 4
  // predicates and 5 object tokens, against every ordering of the 5 tokens
  std::vector<std::string> names_p, names_w;
  for (int i = 0; i < 4; ++i) names_p.push_back("p" + std::to_string(i));
  for (int i = 0; i < 5; ++i) names_w.push_back("w" + std::to_string(i));

  std::size_t cases = 0;
  for (std::size_t length = 1; length <= 6; ++length) {
    std::vector<std::vector<int>> pred_seqs, word_seqs;
    enumerate_rgs(length, 4, pred_seqs);
    enumerate_rgs(length, 5, word_seqs);
    for (const auto& preds : pred_seqs) {
      for (const auto& wordseq : word_seqs) {
        std::vector<TokenTriple> pairs;
        pairs.reserve(length);
        for (std::size_t i = 0; i < length; ++i) {
          pairs.push_back({names_p[preds[i]], names_w[wordseq[i]]});
        }
        const EntityDocument doc = document_from(pairs);

        std::vector<std::string> ordering = names_w;
        do {
          const RankedSummary got = mp_rank(doc, ordering);
          const MpOracleResult expected = mp_oracle(pairs, ordering);
          ++cases;
          if (!equal_result(doc, got, expected)) {
            std::string desc;
            for (const auto& [p, w] : pairs) desc += "(" + p + "," + w + ")";
            check.expect(false, "diverged from the oracle on " + desc);
            return;
          }
        } while (std::next_permutation(ordering.begin(), ordering.end()));
      }
    }
  }
  check.expect(cases > 4000000, "exhaustive enumeration looks too small: " +
                                     std::to_string(cases));

  // randomized part: 10,000 larger cases, oracle equality plus the
  // permutation and predicate-uniqueness-prefix properties
  std::mt19937 gen(99);
  for (int round = 0; round < 10000; ++round) {
    const std::size_t n = 1 + gen() % 20;
    std::vector<TokenTriple> pairs;
    for (std::size_t i = 0; i < n; ++i) {
      pairs.push_back({"p" + std::to_string(gen() % 8), "w" + std::to_string(gen() % 10)});
    }
    std::vector<std::string> ordering;
    for (int w = 0; w < 10; ++w) ordering.push_back("w" + std::to_string(w));
    std::shuffle(ordering.begin(), ordering.end(), gen);
    if (gen() % 3 == 0) ordering.resize(1 + gen() % 10);

    const EntityDocument doc = document_from(pairs);
    const RankedSummary got = mp_rank(doc, ordering);
    check.expect(equal_result(doc, got, mp_oracle(pairs, ordering)),
                 "random case " + std::to_string(round) + " diverged from the oracle");

    std::vector<std::size_t> order_ids;
    for (const Triple& t : got.ordered_triples) order_ids.push_back(t.doc_order);
    std::vector<std::size_t> sorted_ids = order_ids;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    bool is_permutation = sorted_ids.size() == n;
    for (std::size_t i = 0; i < sorted_ids.size(); ++i) {
      is_permutation = is_permutation && sorted_ids[i] == i;
    }
    check.expect(is_permutation, "output is not a permutation of the document");

    std::set<std::string> distinct(doc.predicate_tokens.begin(), doc.predicate_tokens.end());
    std::set<std::string> prefix;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
      prefix.insert(doc.predicate_tokens[got.ordered_triples[i].doc_order]);
    }
    check.expect(prefix.size() == distinct.size(),
                 "first P outputs repeat a predicate in case " + std::to_string(round));
  }
}

/* ------------------------------------------------------------------ */
/* 6. Metric oracle equivalence                                         */

void realize_pattern(std::uint32_t k, std::uint32_t pattern, std::uint32_t gold_size,
                     std::vector<FeaturePair>& summary, GoldStandard& gold) {
  summary.clear();
  std::vector<FeaturePair> gold_pairs;
  std::uint32_t next = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    if (pattern & (1u << i)) {
      FeaturePair pair{"p" + std::to_string(i), "hit" + std::to_string(next++)};
      summary.push_back(pair);
      gold_pairs.push_back(pair);
    } else {
      summary.push_back({"p" + std::to_string(i), "miss" + std::to_string(i)});
    }
  }
  while (gold_pairs.size() < gold_size) {
    gold_pairs.push_back({"fill", "g" + std::to_string(gold_pairs.size())});
  }
  gold.entity_iri = "http://x/e";
  gold.gold_summaries = {std::set<FeaturePair>(gold_pairs.begin(), gold_pairs.end())};
  gold.k_hint = gold_size;
}

void criterion_metric_oracle(Check& check) {
  std::vector<FeaturePair> summary;
  GoldStandard gold;
  for (std::uint32_t k = 1; k <= 10; ++k) {
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
      const auto hits = static_cast<std::uint32_t>(std::popcount(pattern));
      std::uint32_t sizes[4] = {std::max(1u, hits), hits + 2, k, k + 3};
      for (const std::uint32_t gold_size : sizes) {
        if (gold_size < hits || gold_size == 0) continue;
        realize_pattern(k, pattern, gold_size, summary, gold);
        const MetricOracle expected = metric_oracle(k, pattern, gold_size);
        const double f = f_measure(summary, gold, k);
        const double ap = average_precision(summary, gold, k);
        if (std::fabs(f - expected.f) > 1e-12 || std::fabs(ap - expected.ap) > 1e-12) {
          check.expect(false, "k=" + std::to_string(k) + " pattern=" + std::to_string(pattern) +
                                  " gold=" + std::to_string(gold_size) + " diverged");
          return;
        }
      }
    }
  }

  // AP never increases when a relevant rank is swapped with a lower-ranked
  // irrelevant one
  for (std::uint32_t k = 2; k <= 10; ++k) {
    for (std::uint32_t pattern = 0; pattern < (1u << k); ++pattern) {
      for (std::uint32_t i = 0; i < k; ++i) {
        if (!(pattern & (1u << i))) continue;
        for (std::uint32_t j = i + 1; j < k; ++j) {
          if (pattern & (1u << j)) continue;
          const std::uint32_t swapped = (pattern & ~(1u << i)) | (1u << j);
          const auto hits = static_cast<std::uint32_t>(std::popcount(pattern));
          const std::uint32_t gold_size = std::max(hits, k);
          realize_pattern(k, pattern, gold_size, summary, gold);
          const double before = average_precision(summary, gold, k);
          realize_pattern(k, swapped, gold_size, summary, gold);
          const double after = average_precision(summary, gold, k);
          check.expect(after <= before + 1e-15, "AP increased after a demoting swap");
        }
      }
    }
  }
}

/* ------------------------------------------------------------------ */
/* 7. End-to-end determinism via the CLI                                */

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

void criterion_e2e(Check& check) {
  std::filesystem::create_directories(g_scratch);
  const auto run_dir1 = g_scratch / "pipe1";
  const auto run_dir2 = g_scratch / "pipe2";
  const std::string base = shell_quote(g_cli) + " pipeline --input " + shell_quote(g_data + "/toy.nt") +
                           " --categories " + shell_quote(g_data + "/toy_categories.tsv") +
                           " --enrichment both --gold toy=" + shell_quote(g_data + "/toy_gold.tsv") +
                           " --output-dir ";

  const std::string out1 = (g_scratch / "pipe1.out").string();
  check.expect(run_command(base + shell_quote(run_dir1.string()) + " > " + shell_quote(out1) + " 2>&1") == 0,
               "first pipeline run failed");
  check.expect(run_command(base + shell_quote(run_dir2.string()) + " > /dev/null 2>&1") == 0,
               "second pipeline run failed");

  const std::string stdout1 = slurp(out1);
  check.expect(stdout1.find("R=9") != std::string::npos,
               "train output does not report the 9 unique predicates");

  for (const char* name : {"model.bin", "summaries.jsonl", "report.tsv", "report.json",
                           "corpus_stats.tsv", "train_log.tsv"}) {
    const std::string a = slurp(run_dir1 / name);
    const std::string b = slurp(run_dir2 / name);
    check.expect(!a.empty(), std::string(name) + " is empty");
    check.expect(a == b, std::string(name) + " differs between identical runs");
  }

  // usage and data-error exit codes
  check.expect(run_command(shell_quote(g_cli) + " train --output-dir /tmp > /dev/null 2>&1") == 2,
               "missing --input should exit 2");
  const auto bad_gold = g_scratch / "bad_gold.tsv";
  std::ofstream(bad_gold) << "http://x/does_not_exist\ta1\tp\tv\n";
  check.expect(run_command(shell_quote(g_cli) + " eval --summaries " +
                           shell_quote((run_dir1 / "summaries.jsonl").string()) + " --gold bad=" +
                           shell_quote(bad_gold.string()) + " --output-dir " +
                           shell_quote((g_scratch / "bad_eval").string()) + " > /dev/null 2>&1") == 1,
               "gold entity without a summary should exit 1");

  // a perfect-match fixture scores 1.0 everywhere
  const auto perfect_summaries = g_scratch / "perfect.tsv";
  const auto perfect_gold = g_scratch / "perfect_gold.tsv";
  {
    std::ofstream s(perfect_summaries);
    std::ofstream g(perfect_gold);
    for (int i = 1; i <= 5; ++i) {
      s << "http://x/e\t" << i << "\thttp://x/e\thttp://x/p" << i << "\tv" << i << "\n";
      g << "http://x/e\ta1\tp" << i << "\tv" << i << "\n";
    }
  }
  const std::string perfect_out = (g_scratch / "perfect.out").string();
  check.expect(run_command(shell_quote(g_cli) + " eval --summaries " + shell_quote(perfect_summaries.string()) +
                           " --gold perfect=" + shell_quote(perfect_gold.string()) + " --output-dir " +
                           shell_quote((g_scratch / "perfect_eval").string()) + " > " +
                           shell_quote(perfect_out) + " 2>&1") == 0,
               "perfect-match eval failed");
  const std::string perfect_stdout = slurp(perfect_out);
  check.expect(perfect_stdout.find("F\t1.0000\t1.0000\t1.0000\t1.0000") != std::string::npos,
               "perfect-match F row is not all 1.0");
  check.expect(perfect_stdout.find("MAP\t1.0000\t1.0000\t1.0000\t1.0000") != std::string::npos,
               "perfect-match MAP row is not all 1.0");

  // two of five overlapping pairs print F@5 = 0.4
  const auto partial_gold = g_scratch / "partial_gold.tsv";
  {
    std::ofstream g(partial_gold);
    g << "http://x/e\ta1\tp1\tv1\n"
      << "http://x/e\ta1\tp2\tv2\n"
      << "http://x/e\ta1\tq3\tz3\n"
      << "http://x/e\ta1\tq4\tz4\n"
      << "http://x/e\ta1\tq5\tz5\n";
  }
  const std::string partial_out = (g_scratch / "partial.out").string();
  check.expect(run_command(shell_quote(g_cli) + " eval --summaries " + shell_quote(perfect_summaries.string()) +
                           " --gold partial=" + shell_quote(partial_gold.string()) + " --k-list 5" +
                           " --output-dir " + shell_quote((g_scratch / "partial_eval").string()) +
                           " > " + shell_quote(partial_out) + " 2>&1") == 0,
               "partial-match eval failed");
  check.expect(slurp(partial_out).find("F\t0.4000") != std::string::npos,
               "two-of-five overlap should print F@5 = 0.4");
}

/* ------------------------------------------------------------------ */
/* 8. Optional full reproduction                                        */

bool criterion_full_reproduction() {
  const char* bench = std::getenv("ENTSUM_BENCH_DIR");
  if (!bench) {
    std::cout << "SKIP full_reproduction (set ENTSUM_BENCH_DIR to benchmark files: "
                 "<name>.nt + <name>_gold.tsv [+ categories.tsv])"
              << std::endl;
    return true;
  }
  bool ok = true;
  const std::filesystem::path dir(bench);
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".nt") continue;
    const std::string name = entry.path().stem().string();
    const auto gold = dir / (name + "_gold.tsv");
    if (!std::filesystem::exists(gold)) continue;
    std::string cmd = shell_quote(g_cli) + " pipeline --input " + shell_quote(entry.path().string()) +
                      " --gold " + name + "=" + shell_quote(gold.string());
    const auto cats = dir / "categories.tsv";
    if (std::filesystem::exists(cats)) {
      cmd += " --categories " + shell_quote(cats.string()) + " --enrichment both";
    }
    cmd += " --output-dir " + shell_quote((g_scratch / ("bench_" + name)).string());
    std::cout << "full_reproduction: " << name << std::endl;
    if (run_command(cmd) != 0) ok = false;
  }
  std::cout << (ok ? "PASS" : "FAIL") << " full_reproduction (optional)" << std::endl;
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 4) {
    std::cerr << "usage: acceptance_tests <cli-binary> <data-dir> <scratch-dir>\n";
    return 2;
  }
  g_cli = argv[1];
  g_data = argv[2];
  g_scratch = argv[3];
  std::error_code ec;
  std::filesystem::remove_all(g_scratch, ec);
  std::filesystem::create_directories(g_scratch);

  bool ok = true;
  ok &= run_criterion("parser_conformance", 1.0, criterion_parser);
  ok &= run_criterion("normalizer", 0.0, criterion_normalizer);
  ok &= run_criterion("sampler_invariants", 30.0, criterion_sampler);
  ok &= run_criterion("topic_recovery", 30.0, criterion_recovery);
  ok &= run_criterion("mp_oracle_equivalence", 60.0, criterion_mp_oracle);
  ok &= run_criterion("metric_oracle_equivalence", 10.0, criterion_metric_oracle);
  ok &= run_criterion("e2e_determinism", 0.0, criterion_e2e);
  ok &= criterion_full_reproduction();

  return ok ? 0 : 1;
}
