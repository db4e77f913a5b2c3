#include "cmr/error.hpp"
#include "cmr/system.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cmr {

namespace {

// Real Schur form via Hessenberg reduction and shifted QR sweeps.
std::vector<std::complex<double>> eigenvalues(const RationalMatrix& m, const char* label) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  std::vector<std::complex<double>> out;
  if (n == 0) return out;
  Eigen::MatrixXd dense(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) dense(i, j) = m(i, j).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(dense, false);
  if (solver.info() != Eigen::Success)
    throw SpectrumError(std::string("eigenvalue iteration did not converge for ") + label);
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

SpectrumReport validate_spectrum(const CentreSystem& sys, double tol, std::size_t dimension_cap) {
  if (!(tol > 0)) throw ValidationError("spectrum tolerance must be positive");
  if (sys.A.rows() > dimension_cap || sys.B.rows() > dimension_cap)
    throw ValidationError("matrix dimension exceeds the cap of " + std::to_string(dimension_cap));

  SpectrumReport report;
  report.tol = tol;
  report.eigenvalues_a = eigenvalues(sys.A, "A");
  report.eigenvalues_b = eigenvalues(sys.B, "B");
  for (const auto& z : report.eigenvalues_a) report.max_abs_re_a = std::max(report.max_abs_re_a, std::abs(z.real()));
  report.max_re_b = -HUGE_VAL;
  for (const auto& z : report.eigenvalues_b) report.max_re_b = std::max(report.max_re_b, z.real());
  report.pass = report.max_abs_re_a <= tol && report.max_re_b <= -tol;
  return report;
}

}  // namespace cmr
