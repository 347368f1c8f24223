#pragma once

// Dirichlet L-functions on the critical strip for the built-in characters,
// and the Hardy-type rotation used to isolate zeros.

#include <complex>

#include "semirace/characters.hpp"

namespace semirace {

// log Gamma(z) for Re z > 0 on the branch continuous from the positive reals.
std::complex<double> log_gamma(std::complex<double> z);

// Real primitive characters mod 3 and mod 4. Everything else needs zero files.
bool is_builtin(const DirichletCharacter& chi);

// L(s, chi) for a built-in character, Re s > 0, |Im s| <= 500. Throws
// UsageError for other characters.
std::complex<double> l_value(std::complex<double> s, const DirichletCharacter& chi);

// Phase theta(t) = arg Gamma((1/2 + kappa + i t) / 2) + (t/2) log(q/pi) with
// kappa = 0 for even and 1 for odd chi; continuous in t, theta(0) = 0.
double hardy_theta(double t, const DirichletCharacter& chi);

// Completed L-function (q/pi)^((s+kappa)/2) Gamma((s+kappa)/2) L(s, chi).
std::complex<double> completed_l(std::complex<double> s, const DirichletCharacter& chi);

// Z(t) = exp(i theta(t)) L(1/2 + i t, chi), real for the built-in characters
// (root number +1).
double hardy_z(double t, const DirichletCharacter& chi);

namespace detail {
// L(s, chi) for any character mod q via Euler-Maclaurin on the Hurwitz tails.
std::complex<double> dirichlet_l_series(std::complex<double> s, const DirichletCharacter& chi);
}  // namespace detail

}  // namespace semirace
