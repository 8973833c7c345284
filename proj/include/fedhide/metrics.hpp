#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fedhide/dataset.hpp"
#include "fedhide/model.hpp"
#include "fedhide/vecmath.hpp"

namespace fedhide {

// One evaluated round. Field names are the record keys in metrics files.
struct RoundMetrics {
  int round = 0;
  double mean_total_loss = 0.0;
  double mean_positive_loss = 0.0;
  double mean_negative_loss = 0.0;
  double leakage = 0.0;
  std::optional<double> accuracy;
  std::optional<double> eer;
  double proxy_similarity_avg = 0.0;
  double proxy_similarity_std = 0.0;

  friend bool operator==(const RoundMetrics&, const RoundMetrics&) = default;
};

// Fraction of clients c whose proxy is closest (by inner product) to their
// own true prototype among all true prototypes. Entries are keyed by
// position; ties go to the lowest id.
double prototype_leakage(std::span<const UnitVector> true_prototypes, std::span<const UnitVector> proxies);

// argmax_c' <prototypes[c'], v>, lowest index on ties.
std::size_t nearest_prototype(const UnitVector& v, std::span<const UnitVector> prototypes);

struct LabeledEmbedding {
  UnitVector embedding;
  int class_id;
};

double nearest_prototype_accuracy(std::span<const LabeledEmbedding> samples,
                                  std::span<const UnitVector> prototypes);

// Embeds every test sample with the global model and classifies by nearest
// prototype; `prototypes[class_id]` must exist for every test set.
double nearest_prototype_accuracy(const ModelParams& params, std::span<const ClientDataset> test_sets,
                                  std::span<const UnitVector> prototypes);

// Equal error rate: sweep the threshold over every gap between distinct
// scores, with FAR(t) = P(impostor >= t) and FRR(t) = P(genuine < t), and
// interpolate linearly where FAR - FRR changes sign.
double equal_error_rate(std::span<const double> genuine, std::span<const double> impostor);

struct SimilarityStats {
  double avg = 0.0;
  double std = 0.0;  // population
};

SimilarityStats proxy_similarity_stats(std::span<const UnitVector> true_prototypes,
                                       std::span<const UnitVector> proxies);

// Sample indices into ClientDataset::test.
struct SampleRef {
  int client;
  int index;
  friend bool operator==(const SampleRef&, const SampleRef&) = default;
};

struct VerificationPairs {
  std::vector<std::pair<SampleRef, SampleRef>> genuine;
  std::vector<std::pair<SampleRef, SampleRef>> impostor;
};

// All within-client test pairs as genuine plus the same number of random
// cross-client pairs as impostors.
VerificationPairs build_verification_pairs(std::span<const ClientDataset> datasets, std::uint64_t seed);

// EER of cosine scores between global-model embeddings over the pairs.
double verification_eer(const ModelParams& params, std::span<const ClientDataset> datasets,
                        const VerificationPairs& pairs);

}  // namespace fedhide
