#include "jamesgeo/core.hpp"

namespace jamesgeo {

Exponent::Exponent(double p) : p_(p) {
  if (!std::isfinite(p) || !(p > 1.0)) {
    throw PreconditionError("exponent must be a finite real > 1, got " + std::to_string(p));
  }
}

double pairing(const DualFunctional& f, const SeqVector& x) {
  double s = 0.0;
  auto ix = x.entries().begin();
  for (const auto& [i, v] : f.entries()) {
    while (ix != x.entries().end() && ix->first < i) ++ix;
    if (ix == x.entries().end()) break;
    if (ix->first == i) s += v * ix->second;
  }
  return s;
}

DirectSumVector::DirectSumVector(std::vector<DirectSumComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw PreconditionError("a direct sum needs at least one component");
}

DirectSumVector operator-(const DirectSumVector& a, const DirectSumVector& b) {
  if (a.size() != b.size()) throw PreconditionError("direct sums with different component counts");
  std::vector<DirectSumComponent> out;
  out.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& ca = a.components()[i];
    const auto& cb = b.components()[i];
    if (!(ca.exponent == cb.exponent)) {
      throw PreconditionError("direct sum component " + std::to_string(i) +
                              " has mismatched exponents");
    }
    out.push_back({ca.exponent, ca.vector - cb.vector});
  }
  return DirectSumVector(std::move(out));
}

GraphVertex::GraphVertex(std::vector<Index> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw PreconditionError("graph vertex needs k >= 1 indices");
  for (std::size_t i = 1; i < indices_.size(); ++i) {
    if (indices_[i] <= indices_[i - 1]) {
      throw PreconditionError("graph vertex indices must be strictly increasing");
    }
  }
}

}  // namespace jamesgeo
