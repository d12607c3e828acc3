#include <stdexcept>

#include "divstab/stability.hpp"
#include "divstab/tooling.hpp"

namespace divstab {

std::vector<Assignment> enumerate_stable_grid(const Instance& inst, const Rational& step) {
  if (step <= 0) throw std::invalid_argument("grid step must be positive");
  if (inst.num_edges() > kMaxEnumerationEdges) {
    throw std::invalid_argument("grid enumeration is limited to " + std::to_string(kMaxEnumerationEdges) + " edges");
  }
  const std::size_t ne = inst.num_edges();
  std::vector<mpz_class> top(ne);
  for (std::size_t e = 0; e < ne; ++e) {
    Rational ratio = inst.capacity(e) / step;
    mpz_fdiv_q(top[e].get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  }

  std::vector<Assignment> stable;
  std::vector<mpz_class> index(ne, 0);
  std::vector<Rational> values(ne);
  while (true) {
    for (std::size_t e = 0; e < ne; ++e) values[e] = Rational(index[e]) * step;
    if (is_rational(inst, values).first && blocking_edges(inst, values).empty()) {
      stable.push_back(Assignment::make(inst, values));
    }
    std::size_t e = 0;
    while (e < ne && index[e] == top[e]) index[e++] = 0;
    if (e == ne) break;
    ++index[e];
  }
  return stable;
}

}  // namespace divstab
