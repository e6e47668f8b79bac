#include "maxplus/cxmat.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace maxplus {

void require_finite(const CMat& X, const char* what) {
  for (Eigen::Index k = 0; k < X.size(); ++k) {
    const Complex z = X.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw std::invalid_argument(std::string(what) + ": non-finite entry");
    }
  }
}

void require_same_shape(const CMat& X, const CMat& Y, const char* what) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch (" +
                                std::to_string(X.rows()) + "x" + std::to_string(X.cols()) +
                                " vs " + std::to_string(Y.rows()) + "x" +
                                std::to_string(Y.cols()) + ")");
  }
}

void require_square(const CMat& X, const char* what) {
  if (X.rows() != X.cols() || X.rows() == 0) {
    throw std::invalid_argument(std::string(what) + ": expected a nonempty square matrix");
  }
}

double real_inner(const CMat& X, const CMat& Y) {
  require_same_shape(X, Y, "real_inner");
  // Re tr(X^* Y) = sum_jk Re(conj(X_jk) Y_jk)
  double acc = 0.0;
  const Complex* x = X.data();
  const Complex* y = Y.data();
  for (Eigen::Index k = 0; k < X.size(); ++k) {
    acc += x[k].real() * y[k].real() + x[k].imag() * y[k].imag();
  }
  return acc;
}

double frobenius_norm(const CMat& X) { return X.norm(); }

double spectral_norm(const CMat& X) {
  if (X.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> solver(X);
  return solver.singularValues()(0);
}

bool is_hermitian(const CMat& H, double tol) {
  if (H.rows() != H.cols()) return false;
  return (H - H.adjoint()).norm() <= tol;
}

double unitarity_defect(const CMat& U) {
  return (U * U.adjoint() - CMat::Identity(U.rows(), U.cols())).norm();
}

bool is_unitary(const CMat& U, double tol) {
  return U.rows() == U.cols() && unitarity_defect(U) <= tol;
}

SvdFactors svd(const CMat& X, std::size_t max_dim) {
  require_square(X, "svd");
  if (static_cast<std::size_t>(X.rows()) > max_dim) {
    throw std::invalid_argument("svd: dimension exceeds configured maximum");
  }
  Eigen::JacobiSVD<CMat> solver(X, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdFactors f{solver.matrixU(), solver.singularValues(), solver.matrixV().adjoint()};
  const double scale = std::max(1.0, X.norm());
  const double residual = (f.left * f.singular_values.asDiagonal() * f.right - X).norm();
  if (!(residual <= 1e-10 * scale * static_cast<double>(X.rows()))) {
    throw NumericalError("svd: reconstruction residual too large", residual);
  }
  return f;
}

CMat unitary_propagator(const CMat& H, double t) {
  require_square(H, "unitary_propagator");
  require_finite(H, "unitary_propagator");
  if (!is_hermitian(H)) {
    throw std::invalid_argument("unitary_propagator: generator is not Hermitian");
  }
  const CMat sym = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(sym);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("unitary_propagator: eigendecomposition failed", 0.0);
  }
  Eigen::VectorXcd phases(eig.eigenvalues().size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) {
    phases(k) = std::polar(1.0, t * eig.eigenvalues()(k));
  }
  const CMat& V = eig.eigenvectors();
  return V * phases.asDiagonal() * V.adjoint();
}

CMat project_spectral_ball(const CMat& X) {
  require_square(X, "project_spectral_ball");
  const SvdFactors f = svd(X);
  if (f.singular_values(0) <= 1.0) return X;
  const RVec clipped = f.singular_values.cwiseMin(1.0);
  return f.left * clipped.asDiagonal() * f.right;
}

CMat project_frobenius_ball(const CMat& X, const CMat& center, double mu) {
  require_same_shape(X, center, "project_frobenius_ball");
  if (!(mu > 0.0)) throw std::invalid_argument("project_frobenius_ball: mu must be positive");
  const CMat d = X - center;
  const double r = d.norm();
  if (r <= mu) return X;
  return center + (mu / r) * d;
}

DykstraResult dykstra_intersect(const CMat& X, const CMat& center, double mu, double tol,
                                int max_sweeps) {
  require_same_shape(X, center, "dykstra_intersect");
  require_square(X, "dykstra_intersect");
  if (!(mu > 0.0) || !(tol > 0.0)) {
    throw std::invalid_argument("dykstra_intersect: mu and tol must be positive");
  }
  auto excesses = [&](const CMat& Y) {
    return std::pair{std::max(0.0, spectral_norm(Y) - 1.0),
                     std::max(0.0, (Y - center).norm() - mu)};
  };

  DykstraResult out;
  {
    auto [se, be] = excesses(X);
    if (se == 0.0 && be == 0.0) {
      out.point = X;
      return out;
    }
  }
  // A projection onto one set that lands in the other is already the answer.
  for (const CMat& candidate : {project_frobenius_ball(X, center, mu), project_spectral_ball(X)}) {
    auto [se, be] = excesses(candidate);
    if (se <= tol && be <= tol) {
      out.point = candidate;
      out.spectral_excess = se;
      out.ball_excess = be;
      return out;
    }
  }

  CMat x = X;
  CMat p = CMat::Zero(X.rows(), X.cols());
  CMat q = CMat::Zero(X.rows(), X.cols());
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    const CMat y = project_spectral_ball(x + p);
    p = x + p - y;
    const CMat x_next = project_frobenius_ball(y + q, center, mu);
    q = y + q - x_next;
    const double change = (x_next - x).norm();
    x = x_next;
    auto [se, be] = excesses(x);
    if (se <= tol && be <= tol && change <= tol) {
      out.point = x;
      out.spectral_excess = se;
      out.ball_excess = be;
      out.sweeps = sweep;
      return out;
    }
  }
  auto [se, be] = excesses(x);
  out.point = x;
  out.spectral_excess = se;
  out.ball_excess = be;
  out.sweeps = max_sweeps;
  out.exact = false;
  return out;
}

double nuclear_norm(const CMat& X) {
  require_square(X, "nuclear_norm");
  Eigen::JacobiSVD<CMat> solver(X);
  return solver.singularValues().sum();
}

CMat polar_factor(const CMat& X) {
  const SvdFactors f = svd(X);
  return f.left * f.right;
}

RVec to_real(const CMat& X) {
  RVec v(2 * X.size());
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      v(k++) = X(r, c).real();
      v(k++) = X(r, c).imag();
    }
  }
  return v;
}

CMat from_real(const RVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != 2 * rows * cols) throw std::invalid_argument("from_real: size mismatch");
  CMat X(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      X(r, c) = Complex(v(k), v(k + 1));
      k += 2;
    }
  }
  return X;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw std::invalid_argument("cannot parse number '" + token + "'");
  }
  return v;
}

void write_matrix(std::ostream& os, const CMat& X) {
  os << X.rows() << ' ' << X.cols() << '\n';
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    for (Eigen::Index c = 0; c < X.cols(); ++c) {
      if (c) os << ' ';
      os << format_double(X(r, c).real()) << ':' << format_double(X(r, c).imag());
    }
    os << '\n';
  }
}

CMat read_matrix(std::istream& is) {
  std::string line;
  long rows = 0, cols = 0;
  while (std::getline(is, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  {
    std::istringstream header(line);
    if (!(header >> rows >> cols) || rows <= 0 || cols <= 0) {
      throw std::invalid_argument("matrix: bad header '" + line + "'");
    }
  }
  CMat X(rows, cols);
  for (long r = 0; r < rows; ++r) {
    if (!std::getline(is, line)) throw std::invalid_argument("matrix: truncated input");
    std::istringstream row(line);
    std::string tok;
    for (long c = 0; c < cols; ++c) {
      if (!(row >> tok)) throw std::invalid_argument("matrix: short row");
      const auto colon = tok.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("matrix: expected re:im, got '" + tok + "'");
      }
      X(r, c) = Complex(parse_double(tok.substr(0, colon)), parse_double(tok.substr(colon + 1)));
    }
    if (row >> tok) throw std::invalid_argument("matrix: long row");
  }
  require_finite(X, "matrix");
  return X;
}

}  // namespace maxplus
