#include "uzawa/contact_qp.hpp"

#include <string>

#include "uzawa/error.hpp"

namespace uzawa {

void ContactQP::validate() const {
  const std::size_t d = dim();
  const std::size_t m = ncon();
  if (load.size() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "load has length " + std::to_string(load.size()) + ", expected d = " +
                    std::to_string(d));
  }
  if (constraint.cols() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "constraint matrix has " + std::to_string(constraint.cols()) +
                    " columns, expected d = " + std::to_string(d));
  }
  if (gap_offset.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "gap offset has length " + std::to_string(gap_offset.size()) +
                    ", expected m = " + std::to_string(m));
  }
}

Vector gap(const ContactQP& qp, std::span<const double> u) {
  Vector g = matvec(qp.constraint, u);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = qp.gap_offset[i] - g[i];
  return g;
}

}  // namespace uzawa
