// fp.hpp — arithmetic in the prime field F_p.
//
// All coefficients in the library are residues in [0, p) for a small prime
// p.  Inverses use the extended Euclidean algorithm.  Note that the p-th
// power (Frobenius) map is the identity on F_p, so coefficient p-th roots
// are trivial at this level.
#pragma once

#include <cstdint>
#include <stdexcept>

namespace insep {

inline uint32_t fp_add(uint32_t a, uint32_t b, uint32_t p) {
  uint32_t s = a + b;
  return s >= p ? s - p : s;
}

inline uint32_t fp_sub(uint32_t a, uint32_t b, uint32_t p) {
  return a >= b ? a - b : a + p - b;
}

inline uint32_t fp_neg(uint32_t a, uint32_t p) { return a == 0 ? 0 : p - a; }

inline uint32_t fp_mul(uint32_t a, uint32_t b, uint32_t p) {
  return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p);
}

inline uint32_t fp_inv(uint32_t a, uint32_t p) {
  if (a == 0) throw std::domain_error("fp_inv: division by zero");
  // extended Euclid on (a, p); p is prime so gcd is 1
  int64_t r0 = a, r1 = p, s0 = 1, s1 = 0;
  while (r1 != 0) {
    int64_t q = r0 / r1;
    int64_t r2 = r0 - q * r1;
    int64_t s2 = s0 - q * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  int64_t s = s0 % static_cast<int64_t>(p);
  if (s < 0) s += p;
  return static_cast<uint32_t>(s);
}

inline uint32_t fp_div(uint32_t a, uint32_t b, uint32_t p) {
  return fp_mul(a, fp_inv(b, p), p);
}

inline uint32_t fp_pow(uint32_t a, uint64_t e, uint32_t p) {
  uint32_t r = 1 % p;
  uint32_t base = a % p;
  while (e) {
    if (e & 1) r = fp_mul(r, base, p);
    base = fp_mul(base, base, p);
    e >>= 1;
  }
  return r;
}

inline bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace insep
