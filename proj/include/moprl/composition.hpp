#ifndef MOPRL_COMPOSITION_HPP
#define MOPRL_COMPOSITION_HPP

#include <optional>
#include <stdexcept>
#include <vector>

namespace moprl {

// A composition (n_1, ..., n_p) of positive block sizes fixes how monomials
// of p weight families interleave into one string: block k lists n_1
// family-1 entries, then n_2 family-2 entries, and so on; the family-a entry
// at offset r of block k carries the monomial x^(k*n_a + r).
class Composition {
public:
  explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw std::invalid_argument("composition needs at least one part");
    prefix_.resize(parts_.size() + 1, 0);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (parts_[i] < 1) throw std::invalid_argument("composition parts must be >= 1");
      prefix_[i + 1] = prefix_[i] + parts_[i];
    }
  }

  int family_count() const { return static_cast<int>(parts_.size()); }  // p
  int part(int a) const { return parts_[static_cast<std::size_t>(a - 1)]; }  // n_a
  long total() const { return prefix_.back(); }                             // |n|
  long prefix(int a) const { return prefix_[static_cast<std::size_t>(a - 1)]; }  // n_1+...+n_{a-1}
  const std::vector<int>& parts() const { return parts_; }

  bool operator==(const Composition& other) const { return parts_ == other.parts_; }

private:
  std::vector<int> parts_;
  std::vector<long> prefix_;
};

// Block coordinates (k, a, r) of a string index: l = k|n| + n_1+...+n_{a-1} + r.
struct BlockPosition {
  long block = 0;   // k
  int family = 1;   // a, 1-based
  long offset = 0;  // r, 0 <= r < n_a
  bool operator==(const BlockPosition&) const = default;
};

inline BlockPosition decompose(const Composition& n, long l) {
  if (l < 0) throw std::invalid_argument("string index must be nonnegative");
  BlockPosition b;
  b.block = l / n.total();
  long rem = l % n.total();
  int a = 1;
  while (rem >= n.prefix(a) + n.part(a)) ++a;
  b.family = a;
  b.offset = rem - n.prefix(a);
  return b;
}

inline long compose(const Composition& n, const BlockPosition& b) {
  if (b.block < 0 || b.family < 1 || b.family > n.family_count() || b.offset < 0 ||
      b.offset >= n.part(b.family))
    throw std::invalid_argument("block position invalid for composition");
  return b.block * n.total() + n.prefix(b.family) + b.offset;
}

inline int family_of(const Composition& n, long l) { return decompose(n, l).family; }

// Exponent of the monomial carried by string entry l: x^(k*n_a + r).
inline long string_exponent(const Composition& n, long l) {
  const BlockPosition b = decompose(n, l);
  return b.block * n.part(b.family) + b.offset;
}

// The unique value in 1..p congruent to m modulo p.
inline int cyclic_reduce(int p, long m) {
  long r = (m - 1) % p;
  if (r < 0) r += p;
  return static_cast<int>(r) + 1;
}

// Highest exponent among family-a monomials in string entries 0..l;
// nullopt when family a has not occurred yet.
inline std::optional<long> nu_degree(const Composition& n, long l, int a) {
  const BlockPosition b = decompose(n, l);
  long deg;
  if (a < b.family)
    deg = (b.block + 1) * n.part(a) - 1;
  else if (a == b.family)
    deg = b.block * n.part(a) + b.offset;
  else
    deg = b.block * n.part(a) - 1;
  if (deg < 0) return std::nullopt;
  return deg;
}

// Per-family counts of string entries 0..l; all zeros at l = -1.
struct MultiIndex {
  std::vector<long> counts;  // 1-based families stored at counts[a-1]
  long total() const {
    long t = 0;
    for (long c : counts) t += c;
    return t;
  }
  long operator[](int a) const { return counts[static_cast<std::size_t>(a - 1)]; }
  bool operator==(const MultiIndex&) const = default;
};

inline MultiIndex multi_index(const Composition& n, long l) {
  MultiIndex m;
  m.counts.assign(static_cast<std::size_t>(n.family_count()), 0);
  if (l < 0) return m;
  for (int a = 1; a <= n.family_count(); ++a) {
    auto deg = nu_degree(n, l, a);
    m.counts[static_cast<std::size_t>(a - 1)] = deg ? *deg + 1 : 0;
  }
  return m;
}

// Largest l' <= l with family(l') = a; nullopt when no family-a entry
// occurs at or before l.
inline std::optional<long> assoc_minus(const Composition& n, long l, int a) {
  const BlockPosition b = decompose(n, l);
  long r;
  if (a == b.family)
    r = l;
  else if (a < b.family)
    r = b.block * n.total() + n.prefix(a) + n.part(a) - 1;
  else
    r = (b.block - 1) * n.total() + n.prefix(a) + n.part(a) - 1;
  if (r < 0) return std::nullopt;
  return r;
}

// Smallest l' >= l with family(l') = a.
inline long assoc_plus(const Composition& n, long l, int a) {
  const BlockPosition b = decompose(n, l);
  if (a == b.family) return l;
  if (a < b.family) return (b.block + 1) * n.total() + n.prefix(a);
  return b.block * n.total() + n.prefix(a);
}

// Column of the single 1 in row l of the shift operator: (l+1)_{+,a(l)}.
inline long shift_target(const Composition& n, long l) {
  return assoc_plus(n, l + 1, family_of(n, l));
}

// N x N truncation of the shift operator; rows whose target falls outside
// the window are zero.
struct ShiftMatrix {
  long size = 0;
  std::vector<long> target;  // target[l], or -1 for a boundary (zero) row

  bool entry(long i, long j) const { return target[static_cast<std::size_t>(i)] == j; }
};

inline ShiftMatrix shift_matrix(const Composition& n, long N) {
  if (N < 1) throw std::invalid_argument("shift matrix needs N >= 1");
  ShiftMatrix s;
  s.size = N;
  s.target.resize(static_cast<std::size_t>(N));
  for (long l = 0; l < N; ++l) {
    const long t = shift_target(n, l);
    s.target[static_cast<std::size_t>(l)] = t < N ? t : -1;
  }
  return s;
}

}  // namespace moprl

#endif
