#pragma once

#include <string>
#include <vector>

#include "rydsim/errors.hpp"

namespace rydsim {

// Ordered set of atomic level labels, e.g. {"1", "r", "rp"}.  The position of
// a label fixes the index of that level in state vectors and Hamiltonians.
class LevelBasis {
 public:
  LevelBasis() = default;

  explicit LevelBasis(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ValidationError("LevelBasis: empty label set");
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          throw ValidationError("LevelBasis: duplicate label '" + labels_[i] + "'");
  }

  int dim() const { return static_cast<int>(labels_.size()); }

  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool contains(const std::string& label) const {
    for (const auto& l : labels_)
      if (l == label) return true;
    return false;
  }

  int index(const std::string& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return static_cast<int>(i);
    throw ValidationError("LevelBasis: unknown label '" + label + "'");
  }

  bool operator==(const LevelBasis& other) const { return labels_ == other.labels_; }
  bool operator!=(const LevelBasis& other) const { return !(*this == other); }

private:
  std::vector<std::string> labels_;
};

// Tensor-product basis of `n_atoms` copies of a single-atom basis.  Product
// state indices are row-major: atom 0 is the most significant digit.
class ProductBasis {
 public:
  ProductBasis(LevelBasis single, int n_atoms) : single_(std::move(single)), n_atoms_(n_atoms) {
    if (n_atoms < 1) throw ValidationError("ProductBasis: need at least one atom");
    dim_ = 1;
    for (int i = 0; i < n_atoms; ++i) dim_ *= single_.dim();
  }

  const LevelBasis& single() const { return single_; }
  int n_atoms() const { return n_atoms_; }
  int dim() const { return dim_; }

  // Index of the product state with the given per-atom level indices.
  int index(const std::vector<int>& per_atom) const {
    if (static_cast<int>(per_atom.size()) != n_atoms_)
      throw ValidationError("ProductBasis: wrong number of per-atom levels");
    int idx = 0;
    for (int lv : per_atom) {
      if (lv < 0 || lv >= single_.dim()) throw ValidationError("ProductBasis: level index out of range");
      idx = idx * single_.dim() + lv;
    }
    return idx;
  }

  // Level index of atom `atom` within product state `idx`.
  int level_of(int idx, int atom) const {
    int shift = n_atoms_ - 1 - atom;
    for (int i = 0; i < shift; ++i) idx /= single_.dim();
    return idx % single_.dim();
  }

private:
  LevelBasis single_;
  int n_atoms_ = 1;
  int dim_ = 1;
};

}  // namespace rydsim
