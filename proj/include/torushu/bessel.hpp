#pragma once

namespace torushu {

// Bessel function of the first kind J_nu(z) for nu in {0.5, 1.0, ..., 8.0}.
// Absolute error <= 1e-12 for z <= 50; relative error (measured against the
// oscillation amplitude sqrt(2/(pi z))) <= 1e-9 for 50 < z <= 1e5.
double bessel_j(double nu, double z);

// Certified upper bound for J_nu(z)^2: min(1, (2S/pi)/sqrt(z^2 - nu^2)) for
// z > nu with safety factor S = 1.3, else 1. Non-increasing in z and behaving
// as C_env/z for z >> nu.
double bessel_envelope_sq(double nu, double z);

}  // namespace torushu
