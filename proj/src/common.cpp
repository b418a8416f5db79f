#include "cdeg/common.hpp"

#include <cmath>
#include <sstream>

namespace cdeg {

bool all_finite(const Vector& x) { return x.allFinite(); }

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

void require_dim(const Vector& x, Eigen::Index n, const char* what) {
  if (x.size() != n) {
    throw InvalidInput(std::string(what) + ": dimension " + std::to_string(x.size()) +
                       " does not match " + std::to_string(n));
  }
}

std::string format_vector(const Vector& x) {
  std::ostringstream os;
  os.precision(10);
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ')';
  return os.str();
}

}  // namespace cdeg
