#include "fedhide/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "fedhide/errors.hpp"

namespace fedhide {

std::size_t nearest_prototype(const UnitVector& v, std::span<const UnitVector> prototypes) {
  if (prototypes.empty()) throw MissingPrototype("no prototypes to compare against");
  std::size_t best = 0;
  double best_score = prototypes[0].dot(v);
  for (std::size_t i = 1; i < prototypes.size(); ++i) {
    const double s = prototypes[i].dot(v);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

double prototype_leakage(std::span<const UnitVector> true_prototypes, std::span<const UnitVector> proxies) {
  if (true_prototypes.size() != proxies.size()) {
    throw KeyMismatch("leakage: " + std::to_string(true_prototypes.size()) + " prototypes vs " +
                      std::to_string(proxies.size()) + " proxies");
  }
  if (true_prototypes.size() < 2) throw KeyMismatch("leakage needs at least two clients");
  std::size_t hits = 0;
  for (std::size_t c = 0; c < proxies.size(); ++c) {
    if (nearest_prototype(proxies[c], true_prototypes) == c) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(proxies.size());
}

double nearest_prototype_accuracy(std::span<const LabeledEmbedding> samples,
                                  std::span<const UnitVector> prototypes) {
  if (samples.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : samples) {
    if (s.class_id < 0 || static_cast<std::size_t>(s.class_id) >= prototypes.size()) {
      throw MissingPrototype("no prototype for class " + std::to_string(s.class_id));
    }
    if (nearest_prototype(s.embedding, prototypes) == static_cast<std::size_t>(s.class_id)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

double nearest_prototype_accuracy(const ModelParams& params, std::span<const ClientDataset> test_sets,
                                  std::span<const UnitVector> prototypes) {
  std::vector<LabeledEmbedding> samples;
  for (const auto& ds : test_sets) {
    if (ds.class_id < 0 || static_cast<std::size_t>(ds.class_id) >= prototypes.size()) {
      throw MissingPrototype("no prototype for class " + std::to_string(ds.class_id));
    }
    for (const auto& x : ds.test) samples.push_back({embed(params, x), ds.class_id});
  }
  return nearest_prototype_accuracy(samples, prototypes);
}

double equal_error_rate(std::span<const double> genuine, std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) throw EmptyScores("EER needs genuine and impostor scores");
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> im(impostor.begin(), impostor.end());
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  std::vector<double> all;
  all.reserve(g.size() + im.size());
  std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(all));
  all.erase(std::unique(all.begin(), all.end()), all.end());

  const double ng = static_cast<double>(g.size());
  const double ni = static_cast<double>(im.size());
  // Threshold j sits just above all[j-1] (j = 0: below everything).
  // Genuine scores below it are rejected; impostor scores at or above it accepted.
  std::size_t g_below = 0;
  std::size_t i_below = 0;
  double prev_far = 1.0;
  double prev_frr = 0.0;
  for (std::size_t j = 1; j <= all.size(); ++j) {
    const double s = all[j - 1];
    while (g_below < g.size() && g[g_below] <= s) ++g_below;
    while (i_below < im.size() && im[i_below] <= s) ++i_below;
    const double far = (ni - static_cast<double>(i_below)) / ni;
    const double frr = static_cast<double>(g_below) / ng;
    const double d = far - frr;
    if (d <= 0.0) {
      if (d == 0.0) return far;
      const double prev_d = prev_far - prev_frr;
      const double t = prev_d / (prev_d - d);
      return prev_far + t * (far - prev_far);
    }
    prev_far = far;
    prev_frr = frr;
  }
  return prev_far;  // unreachable: the last threshold has FAR = 0, FRR = 1
}

SimilarityStats proxy_similarity_stats(std::span<const UnitVector> true_prototypes,
                                       std::span<const UnitVector> proxies) {
  if (true_prototypes.size() != proxies.size() || proxies.empty()) {
    throw KeyMismatch("similarity stats: prototype and proxy tables differ");
  }
  const double n = static_cast<double>(proxies.size());
  double sum = 0.0;
  std::vector<double> sims(proxies.size());
  for (std::size_t c = 0; c < proxies.size(); ++c) {
    sims[c] = cosine_similarity(true_prototypes[c], proxies[c]);
    sum += sims[c];
  }
  const double mean = sum / n;
  double var = 0.0;
  for (double s : sims) var += (s - mean) * (s - mean);
  return {mean, std::sqrt(var / n)};
}

VerificationPairs build_verification_pairs(std::span<const ClientDataset> datasets, std::uint64_t seed) {
  VerificationPairs pairs;
  std::vector<SampleRef> all;
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    const int n = static_cast<int>(datasets[c].test.size());
    for (int i = 0; i < n; ++i) {
      all.push_back({static_cast<int>(c), i});
      for (int j = i + 1; j < n; ++j) pairs.genuine.push_back({{static_cast<int>(c), i}, {static_cast<int>(c), j}});
    }
  }
  const std::size_t clients_with_tests =
      std::count_if(datasets.begin(), datasets.end(), [](const ClientDataset& d) { return !d.test.empty(); });
  if (clients_with_tests < 2 || pairs.genuine.empty()) return pairs;

  Rng rng = Rng::stream(seed, kServerStream, Purpose::kEval);
  while (pairs.impostor.size() < pairs.genuine.size()) {
    const SampleRef a = all[rng.below(all.size())];
    const SampleRef b = all[rng.below(all.size())];
    if (a.client == b.client) continue;
    pairs.impostor.push_back({a, b});
  }
  return pairs;
}

double verification_eer(const ModelParams& params, std::span<const ClientDataset> datasets,
                        const VerificationPairs& pairs) {
  if (pairs.genuine.empty() || pairs.impostor.empty()) throw EmptyScores("no verification pairs");
  std::vector<std::vector<Vec>> emb(datasets.size());
  for (std::size_t c = 0; c < datasets.size(); ++c)
    for (const auto& x : datasets[c].test) emb[c].push_back(embed(params, x).values());
  auto score = [&](const std::pair<SampleRef, SampleRef>& p) {
    return emb[p.first.client][p.first.index].dot(emb[p.second.client][p.second.index]);
  };
  std::vector<double> g, im;
  g.reserve(pairs.genuine.size());
  im.reserve(pairs.impostor.size());
  for (const auto& p : pairs.genuine) g.push_back(score(p));
  for (const auto& p : pairs.impostor) im.push_back(score(p));
  return equal_error_rate(g, im);
}

}  // namespace fedhide
