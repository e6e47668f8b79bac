#pragma once

// Min-plus value-function representation: psi(X) = min_i <P_i, X> + c_i.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "maxplus/cxmat.hpp"

namespace maxplus {

struct AffineBasis {
  CMat P;  // unitary linear part
  double c = 0.0;
};

struct MinResult {
  double value;
  std::size_t argmin;
};

class BasisSet {
 public:
  BasisSet() = default;
  /// Validates nonemptiness, shared dimension, and unitary linear parts.
  explicit BasisSet(std::vector<AffineBasis> bases, std::vector<std::string> labels = {});

  std::size_t dim() const noexcept { return n_; }
  std::size_t size() const noexcept { return bases_.size(); }
  bool empty() const noexcept { return bases_.empty(); }

  const AffineBasis& operator[](std::size_t i) const { return bases_[i]; }
  const std::vector<AffineBasis>& bases() const noexcept { return bases_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  /// Label of basis i, or an empty string when the set is unlabelled.
  std::string label(std::size_t i) const { return i < labels_.size() ? labels_[i] : std::string(); }

  /// New set holding the listed bases in the given order.
  BasisSet subset(const std::vector<std::size_t>& indices) const;

 private:
  std::size_t n_ = 0;
  std::vector<AffineBasis> bases_;
  std::vector<std::string> labels_;
};

double eval(const AffineBasis& b, const CMat& X);
/// Lowest index wins ties.
MinResult eval_min(const BasisSet& S, const CMat& X);

// File format: "n m", then per basis the matrix block and a "c <value>" line.
void write_basis_set(std::ostream& os, const BasisSet& S);
BasisSet read_basis_set(std::istream& is);
void save_basis_set(const std::string& path, const BasisSet& S);
BasisSet load_basis_set(const std::string& path);

}  // namespace maxplus
