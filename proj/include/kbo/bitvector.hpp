// Fixed-width binary arithmetic over propositional formulas: comparators
// and the carry-chain adder. Vectors store the most significant bit first.
// Addition allocates fresh carry and sum variables and returns the
// definitional side constraint along with the sum bits; the forbidden top
// carry makes an overflowing addition unsatisfiable.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "kbo/formula.hpp"

namespace kbo {

struct BitVector {
  std::vector<Formula> bits;  // MSB first

  int width() const { return static_cast<int>(bits.size()); }

  static BitVector constant(unsigned long long value, int width) {
    if (width <= 0) throw std::invalid_argument("bit vector width must be positive");
    if (width < 64 && value >> width)
      throw std::invalid_argument("constant " + std::to_string(value) + " does not fit in " +
                                  std::to_string(width) + " bits");
    BitVector out;
    out.bits.reserve(static_cast<std::size_t>(width));
    for (int i = width - 1; i >= 0; --i)
      out.bits.push_back(Formula::constant((value >> i) & 1ULL));
    return out;
  }

  static BitVector fresh(VarPool& pool, int width, const std::string& prefix) {
    if (width <= 0) throw std::invalid_argument("bit vector width must be positive");
    BitVector out;
    out.bits.reserve(static_cast<std::size_t>(width));
    for (int i = width; i >= 1; --i)
      out.bits.push_back(mk_var(pool.fresh(prefix + "_" + std::to_string(i))));
    return out;
  }
};

/// A bit vector paired with the side constraint accumulated while building
/// it; constants and single symbols carry the trivial constraint.
struct WeightedBits {
  BitVector bits;
  Formula side = mk_true();
};

/// Zero-extends to the requested width by prefixing constant-false bits.
inline BitVector bv_zero_extend(const BitVector& bv, int width) {
  if (width < bv.width()) throw std::invalid_argument("cannot shrink a bit vector");
  BitVector out;
  out.bits.reserve(static_cast<std::size_t>(width));
  for (int i = bv.width(); i < width; ++i) out.bits.push_back(mk_false());
  for (const Formula& b : bv.bits) out.bits.push_back(b);
  return out;
}

namespace bv_detail {

inline void check_widths(const BitVector& f, const BitVector& g) {
  if (f.width() != g.width())
    throw std::invalid_argument("bit vector width mismatch: " + std::to_string(f.width()) +
                                " vs " + std::to_string(g.width()));
  if (f.width() == 0) throw std::invalid_argument("empty bit vector");
}

}  // namespace bv_detail

/// f > g, unfolded from the least significant bit upwards:
/// strictly greater here, or equal here and greater below.
inline Formula bv_gt(const BitVector& f, const BitVector& g) {
  bv_detail::check_widths(f, g);
  Formula acc = mk_false();
  for (int i = f.width() - 1; i >= 0; --i)
    acc = mk_or(mk_and(f.bits[i], mk_not(g.bits[i])), mk_and(mk_iff(f.bits[i], g.bits[i]), acc));
  return acc;
}

inline Formula bv_eq(const BitVector& f, const BitVector& g) {
  bv_detail::check_widths(f, g);
  std::vector<Formula> per_bit;
  per_bit.reserve(f.bits.size());
  for (std::size_t i = 0; i < f.bits.size(); ++i)
    per_bit.push_back(mk_iff(f.bits[i], g.bits[i]));
  return mk_and(std::move(per_bit));
}

inline Formula bv_geq(const BitVector& f, const BitVector& g) {
  return mk_or(bv_gt(f, g), bv_eq(f, g));
}

/// Sum of two equal-width operands. The result bits are fresh variables;
/// the side constraint conjoins both operand constraints with the carry
/// recurrence (top and bottom carries forced off) and the sum definition.
inline WeightedBits bv_add(const WeightedBits& a, const WeightedBits& b, VarPool& pool) {
  bv_detail::check_widths(a.bits, b.bits);
  const int k = a.bits.width();

  std::vector<Formula> carry;
  carry.reserve(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) carry.push_back(mk_var(pool.fresh("c_" + std::to_string(i))));

  BitVector sum;
  sum.bits.resize(static_cast<std::size_t>(k));
  std::vector<Formula> defs;
  defs.push_back(mk_not(carry[static_cast<std::size_t>(k)]));
  defs.push_back(mk_not(carry[0]));
  for (int i = 1; i <= k; ++i) {
    // bit index i (1 = least significant) lives at vector position k - i
    const Formula& fi = a.bits.bits[static_cast<std::size_t>(k - i)];
    const Formula& gi = b.bits.bits[static_cast<std::size_t>(k - i)];
    const Formula& ci = carry[static_cast<std::size_t>(i)];
    const Formula& ci1 = carry[static_cast<std::size_t>(i - 1)];
    defs.push_back(mk_iff(ci, mk_or({mk_and(fi, gi), mk_and(fi, ci1), mk_and(gi, ci1)})));
    Formula si = mk_var(pool.fresh("s_" + std::to_string(i)));
    defs.push_back(mk_iff(si, mk_xor(fi, mk_xor(gi, ci1))));
    sum.bits[static_cast<std::size_t>(k - i)] = si;
  }

  WeightedBits out;
  out.bits = std::move(sum);
  std::vector<Formula> side{a.side, b.side};
  for (Formula& d : defs) side.push_back(std::move(d));
  out.side = mk_and(std::move(side));
  return out;
}

/// (f, phi) > (g, psi): the comparison conjoined with both
/// side constraints.
inline Formula wb_gt(const WeightedBits& a, const WeightedBits& b) {
  return mk_and(bv_gt(a.bits, b.bits), a.side, b.side);
}

inline Formula wb_eq(const WeightedBits& a, const WeightedBits& b) {
  return mk_and(bv_eq(a.bits, b.bits), a.side, b.side);
}

/// Reads a constant or model-valued bit vector as an integer; formulas must
/// evaluate under the given assignment.
inline unsigned long long bv_value(const BitVector& bv, const std::vector<bool>& assignment) {
  unsigned long long v = 0;
  for (const Formula& bit : bv.bits) v = (v << 1) | (eval(bit, assignment) ? 1ULL : 0ULL);
  return v;
}

}  // namespace kbo
