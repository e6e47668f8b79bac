#include "maxplus/basis.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace maxplus {

BasisSet::BasisSet(std::vector<AffineBasis> bases, std::vector<std::string> labels)
    : bases_(std::move(bases)), labels_(std::move(labels)) {
  if (bases_.empty()) throw std::invalid_argument("BasisSet: empty");
  if (!labels_.empty() && labels_.size() != bases_.size()) {
    throw std::invalid_argument("BasisSet: label count does not match basis count");
  }
  n_ = static_cast<std::size_t>(bases_.front().P.rows());
  for (const auto& b : bases_) {
    require_square(b.P, "BasisSet");
    if (static_cast<std::size_t>(b.P.rows()) != n_) {
      throw std::invalid_argument("BasisSet: bases of different dimension");
    }
    require_finite(b.P, "BasisSet");
    if (!std::isfinite(b.c)) throw std::invalid_argument("BasisSet: non-finite constant");
    if (!is_unitary(b.P, defaults::kUnitaryTol)) {
      throw std::invalid_argument("BasisSet: linear part is not unitary");
    }
  }
}

BasisSet BasisSet::subset(const std::vector<std::size_t>& indices) const {
  std::vector<AffineBasis> out;
  std::vector<std::string> labels;
  out.reserve(indices.size());
  for (std::size_t i : indices) {
    out.push_back(bases_.at(i));
    if (!labels_.empty()) labels.push_back(labels_[i]);
  }
  return BasisSet(std::move(out), std::move(labels));
}

double eval(const AffineBasis& b, const CMat& X) { return real_inner(b.P, X) + b.c; }

MinResult eval_min(const BasisSet& S, const CMat& X) {
  if (S.empty()) throw std::invalid_argument("eval_min: empty basis set");
  MinResult best{eval(S[0], X), 0};
  for (std::size_t i = 1; i < S.size(); ++i) {
    const double v = eval(S[i], X);
    if (v < best.value) best = {v, i};
  }
  return best;
}

void write_basis_set(std::ostream& os, const BasisSet& S) {
  os << S.dim() << ' ' << S.size() << '\n';
  for (const auto& b : S.bases()) {
    write_matrix(os, b.P);
    os << "c " << format_double(b.c) << '\n';
  }
}

BasisSet read_basis_set(std::istream& is) {
  std::string line;
  std::size_t n = 0, m = 0;
  while (std::getline(is, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream header(line);
  if (!(header >> n >> m) || n == 0 || m == 0) {
    throw std::invalid_argument("basis set: bad header '" + line + "'");
  }
  std::vector<AffineBasis> bases;
  bases.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    AffineBasis b;
    b.P = read_matrix(is);
    if (static_cast<std::size_t>(b.P.rows()) != n) {
      throw std::invalid_argument("basis set: matrix dimension differs from header");
    }
    if (!std::getline(is, line)) throw std::invalid_argument("basis set: missing constant line");
    std::istringstream cl(line);
    std::string key, value;
    if (!(cl >> key >> value) || key != "c") {
      throw std::invalid_argument("basis set: expected 'c <value>', got '" + line + "'");
    }
    b.c = parse_double(value);
    bases.push_back(std::move(b));
  }
  return BasisSet(std::move(bases));
}

void save_basis_set(const std::string& path, const BasisSet& S) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_basis_set(os, S);
}

BasisSet load_basis_set(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_basis_set(is);
}

}  // namespace maxplus
