#include "thc/sigma.hpp"

#include <map>

namespace thc {

GT PairingRelation::eval(std::span<const G2> bases, std::span<const Scalar> values) const {
  std::map<std::size_t, std::pair<std::vector<G1>, std::vector<Scalar>>> by_base;
  for (const auto& t : terms_) {
    auto& slot = by_base[t.base];
    slot.first.push_back(t.point);
    slot.second.push_back(values[t.secret]);
  }
  std::vector<std::pair<G1, G2>> pairs;
  for (const auto& [base, slot] : by_base) pairs.emplace_back(multi_exp(slot.first, slot.second), bases[base]);
  return pairing_product(pairs);
}

}  // namespace thc
