#include "lda.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace entsum {

HyperParams default_hyperparams(const Corpus& corpus, BetaMode beta_mode) {
  const double E = static_cast<double>(corpus.entity_count());
  const double R = static_cast<double>(corpus.topic_count());
  HyperParams hp;
  hp.alpha = (E / 20.0) / R;
  hp.beta = beta_mode == BetaMode::fixed_001 ? 0.01 : 50.0 / R;
  return hp;
}

namespace {

struct Instance {
  std::size_t doc;
  std::uint32_t word;
  std::uint32_t slot;  // index into the document's token list
};

double instance_weight(const TfidfWeights* weights, const Instance& inst) {
  return weights ? weights->document_weights(inst.doc)[inst.slot] : 1.0;
}

double current_log_likelihood(const Corpus& corpus, const GibbsCounts& counts, double alpha,
                              double beta) {
  const std::size_t K = corpus.topic_count();
  const std::size_t V = corpus.vocab_size();
  double ll = 0.0;
  for (std::size_t d = 0; d < corpus.entity_count(); ++d) {
    const double denom_d = counts.doc_total[d] + static_cast<double>(K) * alpha;
    const auto& ids = corpus.token_ids(d);
    const auto& tokens = corpus.documents()[d].tokens;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double theta = (counts.doc_topic(d, k) + alpha) / denom_d;
        const double phi = (counts.topic_word(k, ids[j]) + beta) /
                           (counts.topic_total[k] + static_cast<double>(V) * beta);
        p += theta * phi;
      }
      ll += tokens[j].count * std::log(p);
    }
  }
  return ll;
}

}  // namespace

LdaModel gibbs_train(const Corpus& corpus, const HyperParams& params,
                     const TrainOptions& options) {
  const std::size_t E = corpus.entity_count();
  const std::size_t K = corpus.topic_count();
  const std::size_t V = corpus.vocab_size();
  if (K == 0 || V == 0) {
    throw Error(errc::degenerate_corpus, "corpus has no predicates or no object tokens");
  }
  if (params.alpha <= 0.0 || params.beta <= 0.0) {
    throw Error(errc::invalid_argument, "alpha and beta must be positive");
  }
  if (params.iterations == 0 || params.burn_in >= params.iterations) {
    throw Error(errc::invalid_argument, "need iterations > burn_in >= 0");
  }

  // Token instances in fixed order: documents in corpus order, token slots
  // in first-appearance order, one instance per unit of multiplicity.
  std::vector<Instance> instances;
  std::vector<std::size_t> doc_begin(E + 1, 0);
  for (std::size_t d = 0; d < E; ++d) {
    doc_begin[d] = instances.size();
    const auto& ids = corpus.token_ids(d);
    const auto& tokens = corpus.documents()[d].tokens;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      for (std::uint32_t r = 0; r < tokens[j].count; ++r) {
        instances.push_back({d, ids[j], static_cast<std::uint32_t>(j)});
      }
    }
  }
  doc_begin[E] = instances.size();

  GibbsCounts counts;
  counts.doc_topic = Matrix(E, K);
  counts.topic_word = Matrix(K, V);
  counts.topic_total.assign(K, 0.0);
  counts.doc_total.assign(E, 0.0);

  Rng rng(params.seed);
  std::vector<std::uint32_t> z(instances.size());
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    const double w = instance_weight(options.weights, inst);
    const auto k = static_cast<std::uint32_t>(rng.below(K));
    z[i] = k;
    counts.doc_topic(inst.doc, k) += w;
    counts.topic_word(k, inst.word) += w;
    counts.topic_total[k] += w;
    counts.doc_total[inst.doc] += w;
  }

  const double vbeta = static_cast<double>(V) * params.beta;
  std::vector<double> cumulative(K);
  for (std::uint32_t sweep = 1; sweep <= params.iterations; ++sweep) {
    for (std::size_t i = 0; i < instances.size(); ++i) {
      const Instance& inst = instances[i];
      const double w = instance_weight(options.weights, inst);
      const std::uint32_t old_k = z[i];
      counts.doc_topic(inst.doc, old_k) -= w;
      counts.topic_word(old_k, inst.word) -= w;
      counts.topic_total[old_k] -= w;

      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double p = (counts.doc_topic(inst.doc, k) + params.alpha) *
                         (counts.topic_word(k, inst.word) + params.beta) /
                         (counts.topic_total[k] + vbeta);
        total += p;
        cumulative[k] = total;
      }
      const double u = rng.uniform01() * total;
      std::uint32_t new_k = static_cast<std::uint32_t>(K - 1);
      for (std::size_t k = 0; k < K; ++k) {
        if (u < cumulative[k]) {
          new_k = static_cast<std::uint32_t>(k);
          break;
        }
      }

      z[i] = new_k;
      counts.doc_topic(inst.doc, new_k) += w;
      counts.topic_word(new_k, inst.word) += w;
      counts.topic_total[new_k] += w;
    }

    if (options.on_sweep) options.on_sweep(sweep, counts);
    if (options.ll_interval > 0 && options.on_ll &&
        (sweep % options.ll_interval == 0 || sweep == params.iterations)) {
      options.on_ll(sweep, current_log_likelihood(corpus, counts, params.alpha, params.beta));
    }
  }

  LdaModel model;
  model.params = params;
  model.tfidf_weighted = options.weights != nullptr;
  model.predicate_vocab = corpus.predicate_vocab();
  model.object_vocab = corpus.object_vocab();
  model.corpus_hash = corpus.hash();
  model.theta = Matrix(E, K);
  model.phi = Matrix(K, V);
  for (std::size_t d = 0; d < E; ++d) {
    const double denom = counts.doc_total[d] + static_cast<double>(K) * params.alpha;
    for (std::size_t k = 0; k < K; ++k) {
      model.theta(d, k) = (counts.doc_topic(d, k) + params.alpha) / denom;
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = counts.topic_total[k] + vbeta;
    for (std::size_t w = 0; w < V; ++w) {
      model.phi(k, w) = (counts.topic_word(k, w) + params.beta) / denom;
    }
  }
  model.assignments.resize(E);
  for (std::size_t d = 0; d < E; ++d) {
    model.assignments[d].assign(z.begin() + static_cast<std::ptrdiff_t>(doc_begin[d]),
                                z.begin() + static_cast<std::ptrdiff_t>(doc_begin[d + 1]));
  }
  return model;
}

double log_likelihood(const LdaModel& model, const Corpus& corpus) {
  if (model.corpus_hash != corpus.hash()) {
    throw Error(errc::corpus_mismatch, "model was trained on a different corpus");
  }
  const std::size_t K = model.num_topics();
  double ll = 0.0;
  for (std::size_t d = 0; d < corpus.entity_count(); ++d) {
    const auto& ids = corpus.token_ids(d);
    const auto& tokens = corpus.documents()[d].tokens;
    for (std::size_t j = 0; j < ids.size(); ++j) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) p += model.theta(d, k) * model.phi(k, ids[j]);
      ll += tokens[j].count * std::log(p);
    }
  }
  return ll;
}

std::uint32_t select_topic(const LdaModel& model, std::size_t doc_index) {
  if (doc_index >= model.num_docs()) {
    throw Error(errc::invalid_argument, "document index out of range");
  }
  std::uint32_t best = 0;
  double best_value = model.theta(doc_index, 0);
  for (std::size_t k = 1; k < model.num_topics(); ++k) {
    const double v = model.theta(doc_index, k);
    if (v > best_value) {
      best_value = v;
      best = static_cast<std::uint32_t>(k);
    }
  }
  return best;
}

std::vector<std::uint32_t> rank_topic_word_ids(const LdaModel& model, std::uint32_t k) {
  std::vector<std::uint32_t> ids(model.vocab_size());
  std::iota(ids.begin(), ids.end(), 0u);
  std::stable_sort(ids.begin(), ids.end(), [&](std::uint32_t a, std::uint32_t b) {
    return model.phi(k, a) > model.phi(k, b);
  });
  return ids;
}

std::vector<std::string> rank_topic_words(const LdaModel& model, std::uint32_t k) {
  std::vector<std::string> words;
  words.reserve(model.vocab_size());
  for (std::uint32_t id : rank_topic_word_ids(model, k)) words.push_back(model.object_vocab[id]);
  return words;
}

namespace {
constexpr char kMagic[8] = {'E', 'N', 'T', 'S', 'U', 'M', 'M', '1'};
constexpr std::uint64_t kFormatVersion = 1;
}  // namespace

void save_model(const LdaModel& model, std::ostream& out) {
  out.write(kMagic, 8);
  write_u64(out, kFormatVersion);
  write_u64(out, model.corpus_hash);
  write_f64(out, model.params.alpha);
  write_f64(out, model.params.beta);
  write_u64(out, model.params.iterations);
  write_u64(out, model.params.burn_in);
  write_u64(out, model.params.seed);
  write_u64(out, model.tfidf_weighted ? 1 : 0);
  write_str(out, enrichment_name(model.enrichment));
  write_u64(out, model.predicate_vocab.size());
  for (const auto& p : model.predicate_vocab) write_str(out, p);
  write_u64(out, model.object_vocab.size());
  for (const auto& o : model.object_vocab) write_str(out, o);
  write_u64(out, model.theta.rows());
  for (double v : model.theta.data()) write_f64(out, v);
  for (double v : model.phi.data()) write_f64(out, v);
  if (!out) throw Error(errc::io_error, "failed to write model dump");
}

void save_model_file(const LdaModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_error, "cannot open " + path + " for writing");
  save_model(model, out);
}

LdaModel load_model(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (!in || !std::equal(magic, magic + 8, kMagic)) {
    throw Error(errc::io_error, "not a model dump");
  }
  if (read_u64(in) != kFormatVersion) throw Error(errc::io_error, "unsupported model version");

  LdaModel model;
  model.corpus_hash = read_u64(in);
  model.params.alpha = read_f64(in);
  model.params.beta = read_f64(in);
  model.params.iterations = static_cast<std::uint32_t>(read_u64(in));
  model.params.burn_in = static_cast<std::uint32_t>(read_u64(in));
  model.params.seed = read_u64(in);
  model.tfidf_weighted = read_u64(in) != 0;
  const std::string mode = read_str(in);
  const auto enrichment = enrichment_from_name(mode);
  if (!enrichment) throw Error(errc::io_error, "unknown enrichment mode in model dump");
  model.enrichment = *enrichment;

  const std::uint64_t K = read_u64(in);
  model.predicate_vocab.reserve(K);
  for (std::uint64_t i = 0; i < K; ++i) model.predicate_vocab.push_back(read_str(in));
  const std::uint64_t V = read_u64(in);
  model.object_vocab.reserve(V);
  for (std::uint64_t i = 0; i < V; ++i) model.object_vocab.push_back(read_str(in));
  const std::uint64_t E = read_u64(in);
  model.theta = Matrix(E, K);
  for (double& v : model.theta.data()) v = read_f64(in);
  model.phi = Matrix(K, V);
  for (double& v : model.phi.data()) v = read_f64(in);
  if (!in) throw Error(errc::io_error, "truncated model dump");
  return model;
}

LdaModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open " + path);
  return load_model(in);
}

}  // namespace entsum
