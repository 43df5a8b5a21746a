// Part of the arithvc project, licensed under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/integer/mod_inverse.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <utility>
#include <vector>

namespace arithvc {

/// Arbitrary-precision natural number. All operations below are total and
/// closed over the non-negative integers; callers must not construct
/// negative values.
using Nat = boost::multiprecision::cpp_int;

/// Integer part of x/y, with div(x, 0) = 0.
inline Nat div(const Nat& x, const Nat& y) {
  if (y == 0) return 0;
  return x / y;
}

/// Remainder of x on division by y, with rem(x, 0) = x.
inline Nat rem(const Nat& x, const Nat& y) {
  if (y == 0) return x;
  return x % y;
}

/// Truncated subtraction: x - y if y <= x, else 0.
inline Nat monus(const Nat& x, const Nat& y) {
  if (y <= x) return x - y;
  return 0;
}

/// Integer square root: the unique r with r*r <= x < (r+1)*(r+1).
inline Nat isqrt(const Nat& x) { return boost::multiprecision::sqrt(x); }

/// Cantor pairing <x,y> = (x+y+1)(x+y)/2 + y. Bijective between pairs of
/// naturals and naturals.
inline Nat pair(const Nat& x, const Nat& y) {
  Nat s = x + y;
  return (s + 1) * s / 2 + y;
}

namespace detail {
// Diagonal index of z: the unique s with s(s+1)/2 <= z < (s+1)(s+2)/2,
// computed as floor((sqrt(8z+1)+1)/2) - 1.
inline Nat pair_diagonal(const Nat& z) {
  return monus(div(isqrt(8 * z + 1) + 1, 2), 1);
}
}  // namespace detail

/// First projection of the pairing function: left(pair(x, y)) = x.
inline Nat left(const Nat& z) {
  Nat t1 = detail::pair_diagonal(z);
  Nat t2 = 2 * z - t1 * t1;
  return t1 - div(monus(t2, t1), 2);
}

/// Second projection: right(pair(x, y)) = y.
inline Nat right(const Nat& z) {
  Nat t1 = detail::pair_diagonal(z);
  Nat t2 = 2 * z - t1 * t1;
  return div(monus(t2, t1), 2);
}

/// Sequence decoder (beta function): beta(w, i) = rem(left(w), right(w)*(i+1)+1).
/// For w = encode_seq(a) this yields a[i] for every index of a.
inline Nat beta(const Nat& w, const Nat& i) {
  return rem(left(w), right(w) * (i + 1) + 1);
}

/// Packs a nonempty vector into one number by right-nested pairing;
/// a one-element vector packs to its single value.
inline Nat pack_vec(const std::vector<Nat>& v) {
  if (v.empty()) throw std::invalid_argument("pack_vec: empty vector");
  Nat acc = v.back();
  for (std::size_t k = v.size() - 1; k-- > 0;) acc = pair(v[k], acc);
  return acc;
}

/// Inverse of pack_vec for a known arity n >= 1.
inline std::vector<Nat> unpack_vec(const Nat& z, std::size_t n) {
  if (n == 0) throw std::invalid_argument("unpack_vec: arity must be positive");
  std::vector<Nat> out;
  out.reserve(n);
  Nat cur = z;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.push_back(left(cur));
    cur = right(cur);
  }
  out.push_back(cur);
  return out;
}

/// Chinese remainder: given (residue, modulus) pairs with pairwise coprime
/// moduli, returns the unique solution below the product of the moduli.
/// The empty system yields 0.
inline Nat crt(const std::vector<std::pair<Nat, Nat>>& residues) {
  Nat x = 0;
  Nat m = 1;
  for (const auto& [r, mi] : residues) {
    if (mi == 0) throw std::invalid_argument("crt: zero modulus");
    if (boost::multiprecision::gcd(m, mi) != 1)
      throw std::invalid_argument("crt: moduli not pairwise coprime");
    if (mi == 1) continue;
    Nat ri = rem(r, mi);
    // Lift x from modulus m to modulus m*mi.
    Nat delta = rem(ri + mi - rem(x, mi), mi);
    Nat inv = boost::integer::mod_inverse(rem(m, mi), mi);
    x += m * rem(delta * inv, mi);
    m *= mi;
  }
  return x;
}

inline Nat factorial(const Nat& n) {
  Nat acc = 1;
  for (Nat k = 2; k <= n; ++k) acc *= k;
  return acc;
}

/// Encodes a nonempty sequence a so that beta(encode_seq(a), i) = a[i] for
/// all i < |a|. Classic construction: s = max(|a|, max(a))!, moduli
/// m_i = s*(i+1)+1 are pairwise coprime and each exceeds a[i]; solve for c
/// by CRT and return pair(c, s). Codes grow superexponentially; intended
/// for short sequences.
inline Nat encode_seq(const std::vector<Nat>& a) {
  if (a.empty()) throw std::invalid_argument("encode_seq: empty sequence");
  Nat m = a.size();
  for (const Nat& v : a)
    if (v > m) m = v;
  Nat s = factorial(m);
  std::vector<std::pair<Nat, Nat>> sys;
  sys.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    sys.emplace_back(a[i], s * (i + 1) + 1);
  return pair(crt(sys), s);
}

/// Extension witness: a code w' that agrees with w on all positions below z
/// and stores x at position z.
inline Nat extend_seq(const Nat& w, const Nat& z, const Nat& x) {
  std::vector<Nat> vals;
  for (Nat i = 0; i < z; ++i) vals.push_back(beta(w, i));
  vals.push_back(x);
  return encode_seq(vals);
}

}  // namespace arithvc
