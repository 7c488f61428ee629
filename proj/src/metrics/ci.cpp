#include "rlm/metrics/ci.hpp"

#include <cmath>
#include <future>
#include <random>

#include "rlm/util/rng.hpp"

namespace rlm {

void CorrectnessMatrix::validate() const {
  if (rows.empty()) throw InvalidState("correctness matrix has no questions");
  const std::size_t k = rows.front().size();
  if (k < 1) throw InvalidState("correctness matrix needs at least one answer column");
  for (const auto& row : rows) {
    if (row.size() != k) throw InvalidState("ragged correctness matrix");
    for (int cell : row) {
      if (cell != 0 && cell != 1) throw InvalidState("matrix cells must be 0 or 1");
    }
  }
}

CorrectnessMatrix CorrectnessMatrix::bernoulli(std::size_t questions, std::size_t answers,
                                               double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  CorrectnessMatrix m;
  m.rows.assign(questions, std::vector<int>(answers, 0));
  for (auto& row : m.rows) {
    for (auto& cell : row) cell = coin(rng) ? 1 : 0;
  }
  return m;
}

namespace metrics {

namespace {

double mean_ci_length_at(const CorrectnessMatrix& m, int size, int resamples,
                         std::uint64_t seed) {
  const std::size_t q = m.questions();
  const std::size_t k = m.answers();
  std::mt19937_64 rng = substream(seed, static_cast<std::uint64_t>(size));
  std::uniform_int_distribution<std::size_t> row(0, q - 1);

  double total = 0.0;
  std::vector<double> pass1(k);
  for (int r = 0; r < resamples; ++r) {
    std::vector<std::size_t> counts(k, 0);
    for (int i = 0; i < size; ++i) {
      const auto& picked = m.rows[row(rng)];
      for (std::size_t c = 0; c < k; ++c) counts[c] += picked[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
      pass1[c] = static_cast<double>(counts[c]) / static_cast<double>(size);
    }
    if (k > 1) {
      double mean = 0.0;
      for (double v : pass1) mean += v;
      mean /= static_cast<double>(k);
      double ss = 0.0;
      for (double v : pass1) ss += (v - mean) * (v - mean);
      const double sd = std::sqrt(ss / static_cast<double>(k - 1));
      total += 2.0 * 1.96 * sd / std::sqrt(static_cast<double>(k));
    }
  }
  return total / static_cast<double>(resamples);
}

}  // namespace

std::vector<std::pair<int, double>> ci_length_curve(const CorrectnessMatrix& matrix,
                                                    const std::vector<int>& set_sizes,
                                                    int resamples, std::uint64_t seed) {
  matrix.validate();
  if (resamples < 1) throw InvalidConfig("resamples must be positive");
  for (int size : set_sizes) {
    if (size < 1 || static_cast<std::size_t>(size) > matrix.questions()) {
      throw SizeExceedsQuestions("set size " + std::to_string(size) +
                                 " exceeds the question count");
    }
  }

  std::vector<std::future<double>> futures;
  futures.reserve(set_sizes.size());
  for (int size : set_sizes) {
    futures.push_back(std::async(std::launch::async, [&, size] {
      return mean_ci_length_at(matrix, size, resamples, seed);
    }));
  }
  std::vector<std::pair<int, double>> out;
  out.reserve(set_sizes.size());
  for (std::size_t i = 0; i < set_sizes.size(); ++i) {
    out.emplace_back(set_sizes[i], futures[i].get());
  }
  return out;
}

}  // namespace metrics
}  // namespace rlm
