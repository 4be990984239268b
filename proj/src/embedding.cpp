#include "g2t/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

#include "g2t/error.hpp"

namespace g2t {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids,
                                 std::vector<double> values, std::size_t dim)
    : ids_(std::move(ids)), values_(std::move(values)), dim_(dim) {
  if (dim_ == 0 && !ids_.empty()) throw_input("embedding dimension must be >= 1");
  if (values_.size() != ids_.size() * dim_) {
    throw_input("embedding value count does not match rows x dim");
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.try_emplace(ids_[i], i).second) {
      throw_input("duplicate embedding id '" + ids_[i] + "'");
    }
    for (double v : row(i)) {
      if (!std::isfinite(v)) throw_input("non-finite value in embedding '" + ids_[i] + "'");
    }
  }
}

std::optional<std::size_t> EmbeddingMatrix::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingMatrix::row(std::string_view id) const {
  const auto i = index_of(id);
  if (!i) throw_input("no embedding for id '" + std::string(id) + "'");
  return row(*i);
}

EmbeddingMatrix EmbeddingMatrix::select(const std::vector<std::string>& ids) const {
  std::vector<double> values;
  values.reserve(ids.size() * dim_);
  for (const auto& id : ids) {
    const auto r = row(id);
    values.insert(values.end(), r.begin(), r.end());
  }
  return EmbeddingMatrix(ids, std::move(values), dim_);
}

ReduceMethod parse_reduce_method(std::string_view name) {
  if (name == "none") return ReduceMethod::kNone;
  if (name == "pca") return ReduceMethod::kPca;
  throw_config("unknown reduce method '" + std::string(name) + "'");
}

EmbeddingMatrix read_embeddings(std::istream& in) {
  std::vector<std::string> ids;
  std::vector<double> values;
  std::size_t dim = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    const auto where = "embedding line " + std::to_string(line_no) + ": ";

    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw_input(where + "invalid JSON: " + e.what());
    }
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
        !record.contains("embedding") || !record["embedding"].is_array()) {
      throw_input(where + "expected string 'id' and array 'embedding'");
    }
    auto id = record["id"].get<std::string>();
    const auto& vec = record["embedding"];
    if (ids.empty()) {
      dim = vec.size();
      if (dim == 0) throw_input(where + "empty embedding for '" + id + "'");
    } else if (vec.size() != dim) {
      throw_input(where + "ragged row: '" + id + "' has " + std::to_string(vec.size()) +
                  " values, expected " + std::to_string(dim));
    }
    bool all_zero = true;
    for (const auto& v : vec) {
      if (!v.is_number()) throw_input(where + "non-numeric value in '" + id + "'");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw_input(where + "non-finite value in '" + id + "'");
      all_zero = all_zero && x == 0.0;
      values.push_back(x);
    }
    if (all_zero) throw_input(where + "all-zero embedding for '" + id + "'");
    ids.push_back(std::move(id));
  }
  return EmbeddingMatrix(std::move(ids), std::move(values), dim);
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_input("cannot open embedding file " + path.string());
  return read_embeddings(in);
}

void write_embeddings(std::ostream& out, const EmbeddingMatrix& m) {
  char buf[32];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << "{\"id\":" << nlohmann::json(m.ids()[i]).dump() << ",\"embedding\":[";
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", r[j]);
      if (j) out << ',';
      out << buf;
    }
    out << "]}\n";
  }
}

void save_embeddings(const std::filesystem::path& path, const EmbeddingMatrix& m) {
  std::ofstream out(path);
  if (!out) throw_input("cannot write embedding file " + path.string());
  write_embeddings(out, m);
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw_input("cosine_similarity: length mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw_input("cosine_similarity: zero vector");
  const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(sim, -1.0, 1.0);
}

PcaFit fit_pca(const EmbeddingMatrix& m, std::size_t target_dim) {
  const auto n = m.rows();
  const auto d = m.dim();
  if (target_dim < 1 || target_dim > d) {
    throw_config("PCA target dimension " + std::to_string(target_dim) +
                 " must be in [1, " + std::to_string(d) + "]");
  }
  if (n < 2) throw_input("PCA needs at least 2 rows");

  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMajor> x(m.values().data(), static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::MatrixXd centred = x.rowwise() - mean;
  const Eigen::MatrixXd cov =
      (centred.transpose() * centred) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw_input("PCA eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  PcaFit fit;
  fit.dim = d;
  fit.target_dim = target_dim;
  fit.mean.assign(mean.data(), mean.data() + d);
  for (std::size_t c = 0; c < target_dim; ++c) {
    const auto col = static_cast<Eigen::Index>(d - 1 - c);
    Eigen::VectorXd axis = solver.eigenvectors().col(col);
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index j = 0; j < axis.size(); ++j) {
      // Near-ties in magnitude resolve to the lowest coordinate index.
      if (std::abs(axis(j)) > best + 1e-12) {
        best = std::abs(axis(j));
        arg = j;
      }
    }
    if (axis(arg) < 0) axis = -axis;
    fit.components.insert(fit.components.end(), axis.data(), axis.data() + d);
    fit.eigenvalues.push_back(std::max(0.0, solver.eigenvalues()(col)));
  }
  return fit;
}

EmbeddingMatrix reduce_dimensions(const EmbeddingMatrix& m, const ReduceConfig& config) {
  if (config.method == ReduceMethod::kNone) return m;

  const auto fit = fit_pca(m, config.target_dim);
  std::vector<double> out(m.rows() * fit.target_dim);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    for (std::size_t c = 0; c < fit.target_dim; ++c) {
      double acc = 0.0;
      for (std::size_t j = 0; j < fit.dim; ++j) {
        acc += (r[j] - fit.mean[j]) * fit.components[c * fit.dim + j];
      }
      out[i * fit.target_dim + c] = acc;
    }
  }
  return EmbeddingMatrix(m.ids(), std::move(out), fit.target_dim);
}

}  // namespace g2t
