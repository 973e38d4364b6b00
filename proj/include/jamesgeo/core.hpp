#pragma once

// Vocabulary types shared by every module: exponents, finite-support
// sequences on the canonical basis (e_n) and on the coordinate functionals
// (e_n*), direct sums and graph vertices.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jamesgeo {

using Index = std::size_t;

/// Raised when an argument violates an operation's precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exponent p > 1 together with its conjugate q = p / (p - 1).
class Exponent {
 public:
  explicit Exponent(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return p_ / (p_ - 1.0); }

  /// The exponent whose value is q().
  Exponent conjugate() const { return Exponent(q()); }

  friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
    return a.p_ == b.p_;
  }

 private:
  double p_;
};

struct PrimalTag {};
struct DualTag {};

/// Finite-support real sequence indexed by the naturals (0-based).
///
/// Stored in canonical sparse form: entries sorted by index, no duplicates,
/// no exact zeros.
template <class Tag>
class SparseSequence {
 public:
  using Entry = std::pair<Index, double>;

  SparseSequence() = default;

  /// Duplicate indices are summed; exact zeros are purged afterwards.
  explicit SparseSequence(std::vector<Entry> entries) {
    for (const auto& [i, v] : entries) {
      if (!std::isfinite(v)) {
        throw PreconditionError("sequence coefficient at index " + std::to_string(i) +
                                " is not finite");
      }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (const auto& e : entries) {
      if (!entries_.empty() && entries_.back().first == e.first) {
        entries_.back().second += e.second;
      } else {
        entries_.push_back(e);
      }
    }
    purge_zeros();
  }

  static SparseSequence unit(Index n, double value = 1.0) {
    return SparseSequence(std::vector<Entry>{{n, value}});
  }

  /// values[i] becomes the coefficient at offset + i.
  static SparseSequence from_dense(std::span<const double> values, Index offset = 0) {
    std::vector<Entry> e;
    e.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != 0.0) e.emplace_back(offset + i, values[i]);
    }
    return SparseSequence(std::move(e));
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::size_t nnz() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  double operator[](Index n) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const Entry& e, Index k) { return e.first < k; });
    return (it != entries_.end() && it->first == n) ? it->second : 0.0;
  }

  Index min_support() const {
    require_nonzero("min_support");
    return entries_.front().first;
  }
  Index max_support() const {
    require_nonzero("max_support");
    return entries_.back().first;
  }

  std::vector<Index> support() const {
    std::vector<Index> s;
    s.reserve(entries_.size());
    for (const auto& e : entries_) s.push_back(e.first);
    return s;
  }

  /// Coefficients at indices 0 .. length-1.
  std::vector<double> dense(std::size_t length) const { return dense(0, length); }

  /// Coefficients at indices offset .. offset+length-1.
  std::vector<double> dense(Index offset, std::size_t length) const {
    std::vector<double> out(length, 0.0);
    for (const auto& [i, v] : entries_) {
      if (i >= offset && i - offset < length) out[i - offset] = v;
    }
    return out;
  }

  /// Restriction to the index interval [lo, hi].
  SparseSequence restricted(Index lo, Index hi) const {
    SparseSequence r;
    for (const auto& e : entries_) {
      if (e.first >= lo && e.first <= hi) r.entries_.push_back(e);
    }
    return r;
  }

  /// The same coefficients moved so that the support starts at index 0.
  SparseSequence shifted_to_origin() const {
    if (is_zero()) return {};
    SparseSequence r;
    const Index a = min_support();
    for (const auto& [i, v] : entries_) r.entries_.emplace_back(i - a, v);
    return r;
  }

  SparseSequence operator-() const { return *this * -1.0; }

  friend SparseSequence operator*(const SparseSequence& s, double c) {
    SparseSequence r;
    for (const auto& [i, v] : s.entries_) r.entries_.emplace_back(i, v * c);
    r.purge_zeros();
    return r;
  }
  friend SparseSequence operator*(double c, const SparseSequence& s) { return s * c; }

  friend SparseSequence operator+(const SparseSequence& a, const SparseSequence& b) {
    SparseSequence r;
    auto ia = a.entries_.begin();
    auto ib = b.entries_.begin();
    while (ia != a.entries_.end() || ib != b.entries_.end()) {
      if (ib == b.entries_.end() || (ia != a.entries_.end() && ia->first < ib->first)) {
        r.entries_.push_back(*ia++);
      } else if (ia == a.entries_.end() || ib->first < ia->first) {
        r.entries_.push_back(*ib++);
      } else {
        r.entries_.emplace_back(ia->first, ia->second + ib->second);
        ++ia;
        ++ib;
      }
    }
    r.purge_zeros();
    return r;
  }
  friend SparseSequence operator-(const SparseSequence& a, const SparseSequence& b) {
    return a + (-b);
  }

  friend bool operator==(const SparseSequence& a, const SparseSequence& b) = default;

 private:
  void purge_zeros() {
    std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
  }
  void require_nonzero(const char* what) const {
    if (entries_.empty()) throw PreconditionError(std::string(what) + " of the zero sequence");
  }

  std::vector<Entry> entries_;
};

using SeqVector = SparseSequence<PrimalTag>;
using DualFunctional = SparseSequence<DualTag>;

/// <f, x> = sum_n f(n) x(n).
double pairing(const DualFunctional& f, const SeqVector& x);

/// u ≺ v: max supp(u) < min supp(v). Both arguments must be nonzero.
template <class Tag>
bool precedes(const SparseSequence<Tag>& a, const SparseSequence<Tag>& b) {
  if (a.is_zero() || b.is_zero()) {
    throw PreconditionError("precedes is undefined for a zero sequence");
  }
  return a.max_support() < b.min_support();
}

/// Splits s into successive blocks at the given cut indices; a cut c starts
/// a new block at index c. Empty blocks are dropped.
template <class Tag>
std::vector<SparseSequence<Tag>> block_split(const SparseSequence<Tag>& s,
                                             std::span<const Index> cuts) {
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] <= cuts[i - 1]) throw PreconditionError("block cuts must be strictly increasing");
  }
  std::vector<SparseSequence<Tag>> blocks;
  std::vector<typename SparseSequence<Tag>::Entry> current;
  std::size_t next_cut = 0;
  for (const auto& e : s.entries()) {
    bool crossed = false;
    while (next_cut < cuts.size() && e.first >= cuts[next_cut]) {
      ++next_cut;
      crossed = true;
    }
    if (crossed && !current.empty()) {
      blocks.emplace_back(std::move(current));
      current.clear();
    }
    current.push_back(e);
  }
  if (!current.empty()) blocks.emplace_back(std::move(current));
  return blocks;
}

struct DirectSumComponent {
  Exponent exponent;
  SeqVector vector;
};

/// Element of J_{p_1} ⊕_∞ ... ⊕_∞ J_{p_n}.
class DirectSumVector {
 public:
  explicit DirectSumVector(std::vector<DirectSumComponent> components);

  const std::vector<DirectSumComponent>& components() const noexcept { return components_; }
  std::size_t size() const noexcept { return components_.size(); }

  /// Componentwise difference; the exponent lists must agree.
  friend DirectSumVector operator-(const DirectSumVector& a, const DirectSumVector& b);

 private:
  std::vector<DirectSumComponent> components_;
};

/// Strictly increasing k-tuple (n_1 < ... < n_k), k >= 1.
class GraphVertex {
 public:
  explicit GraphVertex(std::vector<Index> indices);

  const std::vector<Index>& indices() const noexcept { return indices_; }
  std::size_t k() const noexcept { return indices_.size(); }
  Index operator[](std::size_t i) const { return indices_[i]; }

  friend auto operator<=>(const GraphVertex&, const GraphVertex&) = default;

 private:
  std::vector<Index> indices_;
};

}  // namespace jamesgeo
