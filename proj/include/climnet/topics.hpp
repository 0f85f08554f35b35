// Copyright 2026 The climnet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <json.hpp>

#include "climnet/csv.hpp"
#include "climnet/util.hpp"

namespace climnet {

/// Retained terms in lexicographic order; index i is column i of the TF-IDF matrix.
class Vocabulary {
 public:
  Vocabulary() = default;

  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df, std::vector<double> idf)
      : terms_(std::move(terms)), df_(std::move(df)), idf_(std::move(idf)) {
    for (std::size_t i = 0; i < terms_.size(); ++i) index_.emplace(terms_[i], i);
  }

  std::size_t size() const { return terms_.size(); }
  const std::string& term(std::size_t i) const { return terms_.at(i); }
  std::size_t df(std::size_t i) const { return df_.at(i); }
  double idf(std::size_t i) const { return idf_.at(i); }
  const std::vector<std::string>& terms() const { return terms_; }

  std::optional<std::size_t> find(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Nonnegative document x term matrix.
struct TfidfMatrix {
  SparseRowMatrix values;

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }

  static TfidfMatrix from_dense(const Eigen::MatrixXd& dense) {
    if ((dense.array() < 0.0).any()) throw std::invalid_argument("TfidfMatrix: negative entry");
    return {dense.sparseView()};
  }
};

class EmptyVocabulary : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TfidfResult {
  Vocabulary vocabulary;
  TfidfMatrix matrix;
};

/// TF-IDF with raw term counts, smoothed idf = ln((1 + N) / (1 + df)) + 1 and
/// L2-normalized rows. Terms appearing in fewer than `min_df` documents are dropped.
inline TfidfResult build_tfidf(const std::vector<std::vector<std::string>>& corpus, std::size_t min_df = 2) {
  if (corpus.empty()) throw std::invalid_argument("build_tfidf: empty corpus");
  std::map<std::string, std::size_t> df_all;
  for (const auto& doc : corpus) {
    std::vector<std::string> uniq(doc.begin(), doc.end());
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (auto& t : uniq) ++df_all[t];
  }
  const double n_docs = static_cast<double>(corpus.size());
  std::vector<std::string> terms;
  std::vector<std::size_t> df;
  std::vector<double> idf;
  for (const auto& [t, d] : df_all) {
    if (d < min_df) continue;
    terms.push_back(t);
    df.push_back(d);
    idf.push_back(std::log((1.0 + n_docs) / (1.0 + static_cast<double>(d))) + 1.0);
  }
  if (terms.empty()) throw EmptyVocabulary("no term reaches min_df = " + std::to_string(min_df));
  Vocabulary vocab(std::move(terms), std::move(df), std::move(idf));

  std::vector<Eigen::Triplet<double>> triplets;
  std::map<std::size_t, double> counts;
  for (std::size_t r = 0; r < corpus.size(); ++r) {
    counts.clear();
    for (const auto& t : corpus[r])
      if (auto col = vocab.find(t)) counts[*col] += 1.0;
    double norm2 = 0.0;
    for (auto& [col, c] : counts) {
      c *= vocab.idf(col);
      norm2 += c * c;
    }
    const double norm = std::sqrt(norm2);
    for (const auto& [col, v] : counts)
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(col), v / norm);
  }
  SparseRowMatrix x(static_cast<Eigen::Index>(corpus.size()), static_cast<Eigen::Index>(vocab.size()));
  x.setFromTriplets(triplets.begin(), triplets.end());
  x.makeCompressed();
  return {std::move(vocab), TfidfMatrix{std::move(x)}};
}

/// X ~ H W with W topics x terms and H documents x topics.
struct NmfModel {
  Eigen::MatrixXd W;
  Eigen::MatrixXd H;

  std::size_t k() const { return static_cast<std::size_t>(W.rows()); }
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Frobenius norm of X - H W.
inline double reconstruction_error(const TfidfMatrix& x, const NmfModel& model) {
  if (model.H.rows() != x.rows() || model.W.cols() != x.cols() || model.H.cols() != model.W.rows())
    throw std::domain_error("reconstruction_error: shape mismatch");
  double sum = 0.0;
  Eigen::RowVectorXd row(x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    row.noalias() = model.H.row(r) * model.W;
    for (SparseRowMatrix::InnerIterator it(x.values, r); it; ++it) row(it.col()) -= it.value();
    sum += row.squaredNorm();
  }
  return std::sqrt(sum);
}

struct NmfOptions {
  std::size_t k = 10;
  std::size_t batch_size = 1024;
  std::size_t max_iters = 200;  // epochs
  double tol = 1e-4;            // on the relative change of the full-corpus error between epochs
  std::uint64_t seed = 0;
  double decay = 0.9;           // weight of earlier batches in the W statistics
  std::size_t h_inner_iters = 5;
  /// Called after every epoch with the epoch number (from 1) and the full-corpus error.
  std::function<void(std::size_t, const NmfModel&, double)> on_epoch;
};

struct NmfFit {
  NmfModel model;
  std::vector<double> errors;  // full-corpus error after each epoch
  bool converged = false;
};

/// Mini-batch NMF with multiplicative updates on 1/2 ||X - H W||_F^2.
///
/// Each epoch shuffles the document rows into batches. For a batch B the rows
/// H_B get `h_inner_iters` multiplicative updates against the current W, then
/// W is updated from the statistics A = sum H_B^T X_B and C = sum H_B^T H_B,
/// accumulated over the epoch's batches with exponential decay:
///
///   W <- W * A / (C W)
///
/// With a single batch per epoch this is the classical alternating update
/// and the error cannot increase between epochs.
inline NmfFit fit_minibatch_nmf(const TfidfMatrix& x, const NmfOptions& opt) {
  const auto n_docs = x.rows();
  const auto n_terms = x.cols();
  const auto k = static_cast<Eigen::Index>(opt.k);
  if (opt.k < 1 || k > std::min(n_docs, n_terms))
    throw std::domain_error("fit_minibatch_nmf: k = " + std::to_string(opt.k) + " outside [1, min(rows, cols)]");
  if (opt.batch_size < 1) throw std::invalid_argument("fit_minibatch_nmf: batch_size must be >= 1");
  if (!(opt.decay >= 0.0 && opt.decay <= 1.0)) throw std::invalid_argument("fit_minibatch_nmf: decay outside [0, 1]");
  for (Eigen::Index r = 0; r < n_docs; ++r)
    for (SparseRowMatrix::InnerIterator it(x.values, r); it; ++it)
      if (!std::isfinite(it.value()) || it.value() < 0.0)
        throw NumericalError("fit_minibatch_nmf: input must be finite and nonnegative");

  constexpr double eps = 1e-15;
  std::mt19937_64 rng(opt.seed);
  const double mean = x.values.sum() / (static_cast<double>(n_docs) * static_cast<double>(n_terms));
  const double scale = std::sqrt(std::max(mean, 0.0) / static_cast<double>(opt.k));
  std::uniform_real_distribution<double> unif(std::numeric_limits<double>::min(), 1.0);

  NmfFit fit;
  NmfModel& m = fit.model;
  m.W.resize(k, n_terms);
  m.H.resize(n_docs, k);
  for (Eigen::Index i = 0; i < m.W.size(); ++i) m.W.data()[i] = scale * unif(rng);
  for (Eigen::Index i = 0; i < m.H.size(); ++i) m.H.data()[i] = scale * unif(rng);
  if (scale == 0.0) {
    m.W.setConstant(std::numeric_limits<double>::min());
    m.H.setConstant(std::numeric_limits<double>::min());
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n_docs));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  Eigen::MatrixXd stats_a(k, n_terms), stats_c(k, k);
  Eigen::MatrixXd hb, num;
  double prev = reconstruction_error(x, m);

  for (std::size_t epoch = 1; epoch <= opt.max_iters; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    stats_a.setZero();
    stats_c.setZero();
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      const std::size_t end = std::min(order.size(), start + opt.batch_size);
      const auto b = static_cast<Eigen::Index>(end - start);
      hb.resize(b, k);
      for (Eigen::Index r = 0; r < b; ++r) hb.row(r) = m.H.row(order[start + r]);

      // X_B W^T, fixed while H_B is refined.
      num.setZero(b, k);
      for (Eigen::Index r = 0; r < b; ++r)
        for (SparseRowMatrix::InnerIterator it(x.values, order[start + r]); it; ++it)
          num.row(r).noalias() += it.value() * m.W.col(it.col()).transpose();
      const Eigen::MatrixXd wwt = m.W * m.W.transpose();
      for (std::size_t it = 0; it < opt.h_inner_iters; ++it) {
        const Eigen::MatrixXd den = hb * wwt;
        hb.array() *= num.array() / (den.array() + eps);
      }
      for (Eigen::Index r = 0; r < b; ++r) m.H.row(order[start + r]) = hb.row(r);

      stats_a *= opt.decay;
      stats_c *= opt.decay;
      for (Eigen::Index r = 0; r < b; ++r)
        for (SparseRowMatrix::InnerIterator it(x.values, order[start + r]); it; ++it)
          stats_a.col(it.col()).noalias() += it.value() * hb.row(r).transpose();
      stats_c.noalias() += hb.transpose() * hb;
      const Eigen::MatrixXd den = stats_c * m.W;
      m.W.array() *= stats_a.array() / (den.array() + eps);
    }

    if (!m.W.allFinite() || !m.H.allFinite()) throw NumericalError("fit_minibatch_nmf: non-finite factor values");
    const double err = reconstruction_error(x, m);
    if (!std::isfinite(err)) throw NumericalError("fit_minibatch_nmf: non-finite reconstruction error");
    fit.errors.push_back(err);
    if (opt.on_epoch) opt.on_epoch(epoch, m, err);
    const double change = prev > 0.0 ? std::abs(prev - err) / prev : 0.0;
    prev = err;
    if (err == 0.0 || change < opt.tol) {
      fit.converged = true;
      break;
    }
  }
  return fit;
}

/// The `n` highest-weighted terms of `topic`, descending; ties by ascending term.
inline std::vector<std::pair<std::string, double>> top_words(const NmfModel& model, const Vocabulary& vocab,
                                                             std::size_t topic, std::size_t n = 20) {
  if (topic >= model.k()) throw std::domain_error("top_words: topic " + std::to_string(topic) + " out of range");
  if (static_cast<std::size_t>(model.W.cols()) != vocab.size()) throw std::domain_error("top_words: vocabulary size mismatch");
  if (n < 1) throw std::invalid_argument("top_words: n must be >= 1");
  std::vector<std::size_t> idx(vocab.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const auto row = model.W.row(static_cast<Eigen::Index>(topic));
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double sa = row(static_cast<Eigen::Index>(a)), sb = row(static_cast<Eigen::Index>(b));
    if (sa != sb) return sa > sb;
    return vocab.term(a) < vocab.term(b);
  });
  if (idx.size() > n) idx.resize(n);
  std::vector<std::pair<std::string, double>> out;
  out.reserve(idx.size());
  for (auto i : idx) out.emplace_back(vocab.term(i), row(static_cast<Eigen::Index>(i)));
  return out;
}

inline std::string topics_json(const NmfModel& model, const Vocabulary& vocab, std::size_t n = 20) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < model.k(); ++t) {
    nlohmann::ordered_json words = nlohmann::ordered_json::array();
    for (const auto& [term, score] : top_words(model, vocab, t, n)) words.push_back({{"term", term}, {"score", score}});
    arr.push_back({{"topic", t}, {"words", std::move(words)}});
  }
  return arr.dump(2);
}

inline void write_vocabulary(std::ostream& out, const Vocabulary& vocab) {
  out << "term,index,df\n";
  for (std::size_t i = 0; i < vocab.size(); ++i)
    write_csv_row(out, {vocab.term(i), std::to_string(i), std::to_string(vocab.df(i))});
}

}  // namespace climnet
