#ifndef ENTSUM_LDA_HPP
#define ENTSUM_LDA_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "util.hpp"

namespace entsum {

struct HyperParams {
  double alpha = 0.0;  // symmetric prior on document-predicate distributions
  double beta = 0.0;   // symmetric prior on predicate-object distributions
  std::uint32_t iterations = 1000;
  std::uint32_t burn_in = 200;
  std::uint64_t seed = 42;
};

enum class BetaMode { fixed_001, fifty_over_R };

// alpha = (E/20)/R; beta = 0.01 or 50/R depending on the mode.
HyperParams default_hyperparams(const Corpus& corpus, BetaMode beta_mode);

// Count statistics of the collapsed state. Doubles throughout: with TF-IDF
// weighting each token instance contributes its weight instead of 1.
struct GibbsCounts {
  Matrix doc_topic;                 // E x K
  Matrix topic_word;                // K x V
  std::vector<double> topic_total;  // K
  std::vector<double> doc_total;    // E, fixed after initialization
};

struct TrainOptions {
  const TfidfWeights* weights = nullptr;  // null = unweighted
  // Called after every full sweep with the current counts.
  std::function<void(std::uint32_t sweep, const GibbsCounts&)> on_sweep;
  // Log-likelihood of the current state every `ll_interval` sweeps (and at
  // the final sweep). 0 disables.
  std::uint32_t ll_interval = 0;
  std::function<void(std::uint32_t sweep, double ll)> on_ll;
};

struct LdaModel {
  HyperParams params;
  bool tfidf_weighted = false;
  Enrichment enrichment = Enrichment::none;  // how the training corpus was built
  std::vector<std::string> predicate_vocab;
  std::vector<std::string> object_vocab;
  Matrix theta;  // E x K document-predicate distributions
  Matrix phi;    // K x V predicate-object distributions
  // Final topic assignment per token instance, per document. Held in memory
  // only; the dump stores params, vocabularies, theta and phi.
  std::vector<std::vector<std::uint32_t>> assignments;
  std::uint64_t corpus_hash = 0;

  std::size_t num_docs() const { return theta.rows(); }
  std::size_t num_topics() const { return theta.cols(); }
  std::size_t vocab_size() const { return phi.cols(); }
};

// Collapsed Gibbs sampling over token-level topic assignments with the
// conditional p(z=k | rest) proportional to
//   (n_dk + alpha) * (n_kw + beta) / (n_k + V*beta),
// counts taken with the current instance removed. Theta and phi are the
// smoothed estimates from the final sweep's counts. Deterministic for a
// fixed (corpus, params, weights).
LdaModel gibbs_train(const Corpus& corpus, const HyperParams& params,
                     const TrainOptions& options = {});

// Sum over token instances of log sum_k theta[d][k] * phi[k][w].
double log_likelihood(const LdaModel& model, const Corpus& corpus);

// argmax_k theta[doc][k], ties to the lowest index.
std::uint32_t select_topic(const LdaModel& model, std::size_t doc_index);

// All object vocabulary ids ordered by phi[k][.] descending, ties to the
// lower id.
std::vector<std::uint32_t> rank_topic_word_ids(const LdaModel& model, std::uint32_t k);
std::vector<std::string> rank_topic_words(const LdaModel& model, std::uint32_t k);

void save_model(const LdaModel& model, std::ostream& out);
void save_model_file(const LdaModel& model, const std::string& path);
LdaModel load_model(std::istream& in);
LdaModel load_model_file(const std::string& path);

}  // namespace entsum

#endif
