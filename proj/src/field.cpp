#include "mm/field.hpp"

#include <cmath>

#include "mm/errors.hpp"

namespace mm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Raw field components and their first partials.
struct FieldDerivs {
  double B1, B2;
  double B1x, B1z, B2x, B2z;
};

FieldDerivs raw_field(double x, double z, double beta) {
  const double A = beta * (x * x - x);
  const double Ap = beta * (2.0 * x - 1.0);
  const double App = 2.0 * beta;
  const double s = std::sin(kPi * z);
  const double c = std::cos(kPi * z);
  FieldDerivs d;
  d.B1 = kPi * A * s;
  d.B2 = Ap * c + kPi;
  d.B1x = kPi * Ap * s;
  d.B1z = kPi * kPi * A * c;
  d.B2x = App * c;
  d.B2z = -kPi * Ap * s;
  return d;
}

}  // namespace

UnitField magnetic_field(double x, double z, double beta) {
  const FieldDerivs d = raw_field(x, z, beta);
  const double s2 = d.B1 * d.B1 + d.B2 * d.B2;
  if (s2 < 1e-24) {
    throw DegenerateFieldError("magnetic field vanishes at the sampled point");
  }
  const double inv = 1.0 / std::sqrt(s2);
  UnitField u;
  u.b1 = d.B1 * inv;
  u.b2 = d.B2 * inv;
  u.b11 = u.b1 * u.b1;
  u.b12 = u.b1 * u.b2;
  u.b21 = u.b12;
  u.b22 = u.b2 * u.b2;
  return u;
}

double phi_exact(double x, double z, const FieldParams& p) {
  const double A = p.beta * (x * x - x);
  const double theta = p.m * (kPi * x + A * std::cos(kPi * z));
  return std::sin(theta) + p.eps * std::cos(2.0 * kPi * z) * std::sin(kPi * x);
}

double forcing_f(double x, double z, const FieldParams& p) {
  const FieldDerivs d = raw_field(x, z, p.beta);
  const double S = d.B1 * d.B1 + d.B2 * d.B2;
  if (S < 1e-24) {
    throw DegenerateFieldError("magnetic field vanishes at the sampled point");
  }
  const double Sx = 2.0 * (d.B1 * d.B1x + d.B2 * d.B2x);
  const double Sz = 2.0 * (d.B1 * d.B1z + d.B2 * d.B2z);

  // b (x) b entries and the divergence-relevant partials, by the quotient rule
  // on b_ij = B_i B_j / S.
  const double b11 = d.B1 * d.B1 / S;
  const double b12 = d.B1 * d.B2 / S;
  const double b22 = d.B2 * d.B2 / S;
  const double b11x = 2.0 * d.B1 * d.B1x / S - d.B1 * d.B1 * Sx / (S * S);
  const double b12x = (d.B1x * d.B2 + d.B1 * d.B2x) / S - d.B1 * d.B2 * Sx / (S * S);
  const double b21z = (d.B1z * d.B2 + d.B1 * d.B2z) / S - d.B1 * d.B2 * Sz / (S * S);
  const double b22z = 2.0 * d.B2 * d.B2z / S - d.B2 * d.B2 * Sz / (S * S);

  // Leading term phi1 = sin(theta): grad(theta) = m*(B2, -B1) is orthogonal to
  // B pointwise, so lap_par(phi1) = 0 and only the full Laplacian survives.
  const double A = p.beta * (x * x - x);
  const double App = 2.0 * p.beta;
  const double cpz = std::cos(kPi * z);
  const double theta = p.m * (kPi * x + A * cpz);
  const double lap_phi1 =
      -p.m * p.m * S * std::sin(theta) + p.m * cpz * (App - kPi * kPi * A) * std::cos(theta);

  // Perturbation psi = cos(2 pi z) sin(pi x).
  const double psi = std::cos(2.0 * kPi * z) * std::sin(kPi * x);
  const double psix = kPi * std::cos(kPi * x) * std::cos(2.0 * kPi * z);
  const double psiz = -2.0 * kPi * std::sin(kPi * x) * std::sin(2.0 * kPi * z);
  const double psixx = -kPi * kPi * psi;
  const double psizz = -4.0 * kPi * kPi * psi;
  const double psixz = -2.0 * kPi * kPi * std::cos(kPi * x) * std::sin(2.0 * kPi * z);
  const double lap_psi = psixx + psizz;
  const double lappar_psi = b11 * psixx + 2.0 * b12 * psixz + b22 * psizz +
                            (b11x + b21z) * psix + (b12x + b22z) * psiz;

  // f = -lap(phi) + (1 - 1/eps) lap_par(phi) with lap_par(phi) = eps*lap_par(psi).
  return -lap_phi1 - p.eps * lap_psi + (p.eps - 1.0) * lappar_psi;
}

}  // namespace mm
