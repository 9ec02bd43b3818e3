#pragma once

// Complete sets of mutually unbiased bases in prime dimension.

#include <cmath>
#include <numbers>

#include "vnlab/matcore.hpp"

namespace vnlab::detail {

inline bool is_prime(Index n) {
  if (n < 2) return false;
  for (Index q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

// Basis `which` ∈ [0, p] as the columns of a unitary. Basis 0 is computational;
// for p = 2 bases 1 and 2 are the X and Y eigenbases, and for odd p basis 1 + m
// has vectors ω^{m k² + j k}/√p.
inline cmat mub_basis(Index p, Index which) {
  cmat u(p, p);
  if (which == 0) return cmat::Identity(p, p);
  const double norm = 1 / std::sqrt(double(p));
  if (p == 2) {
    const cplx second = which == 1 ? cplx(1, 0) : cplx(0, 1);
    u << norm, norm, norm * second, -norm * second;
    return u;
  }
  const Index m = which - 1;
  for (Index j = 0; j < p; ++j)
    for (Index k = 0; k < p; ++k) {
      const Index phase = (m * k * k + j * k) % p;
      u(k, j) = std::polar(norm, 2 * std::numbers::pi * double(phase) / double(p));
    }
  return u;
}

}  // namespace vnlab::detail
