#pragma once

namespace mm {

/// Parameters of the magnetic field and the manufactured solution.
struct FieldParams {
  double beta = 0.0;  // field curvature; 0 gives b = (0,1)
  int m = 4;          // oscillation count of the manufactured solution
  double eps = 1.0;   // inverse anisotropy strength
};

/// Unit field direction b = B/|B| and the entries of b (x) b.
struct UnitField {
  double b1, b2;
  double b11, b12, b21, b22;
};

/// B = (pi*beta*(x^2-x)*sin(pi z), beta*(2x-1)*cos(pi z) + pi), normalized.
UnitField magnetic_field(double x, double z, double beta);

/// phi(x,z) = sin(m*(pi x + beta(x^2-x) cos(pi z))) + eps*cos(2 pi z) sin(pi x).
double phi_exact(double x, double z, const FieldParams& p);

/// f = -lap_perp(phi) - (1/eps) lap_par(phi), evaluated from the closed-form
/// derivatives. The 1/eps contribution is eps-uniform because the parallel
/// Laplacian of the leading term of phi vanishes identically.
double forcing_f(double x, double z, const FieldParams& p);

}  // namespace mm
