#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace g2t {

/// Row-major matrix of embeddings keyed by id. Construction checks shape,
/// id uniqueness and finiteness. All-zero rows are rejected by the loader and
/// by the graph builder, but a reduced matrix may legitimately contain one.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  EmbeddingMatrix(std::vector<std::string> ids, std::vector<double> values,
                  std::size_t dim);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }

  std::optional<std::size_t> index_of(std::string_view id) const;
  std::span<const double> row(std::string_view id) const;

  /// Rows reordered to match `ids`, which must be a subset of this matrix.
  EmbeddingMatrix select(const std::vector<std::string>& ids) const;

 private:
  std::vector<std::string> ids_;
  std::vector<double> values_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class ReduceMethod { kNone, kPca };

ReduceMethod parse_reduce_method(std::string_view name);

struct ReduceConfig {
  ReduceMethod method = ReduceMethod::kNone;
  std::size_t target_dim = 5;
};

EmbeddingMatrix read_embeddings(std::istream& in);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);

/// EMB-JSONL with 17 significant digits, so reading it back is bit-exact.
void write_embeddings(std::ostream& out, const EmbeddingMatrix& m);
void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m);

double cosine_similarity(std::span<const double> a, std::span<const double> b);

struct PcaFit {
  std::vector<double> mean;          // length dim
  std::vector<double> components;    // target_dim x dim, row-major
  std::vector<double> eigenvalues;   // descending, length target_dim
  std::size_t dim = 0;
  std::size_t target_dim = 0;
};

PcaFit fit_pca(const EmbeddingMatrix& m, std::size_t target_dim);

/// PCA: mean-centred projection onto the leading principal axes, ordered by
/// descending eigenvalue, each axis signed so its largest-magnitude
/// coordinate is positive.
EmbeddingMatrix reduce_dimensions(const EmbeddingMatrix& m,
                                  const ReduceConfig& config);

}  // namespace g2t
