#include "telenoise/css_code.hpp"

#include <sstream>

namespace telenoise {

int mod2_dot(const BinaryRow& a, const BinaryRow& b) {
  if (a.size() != b.size()) {
    throw DimensionError("mod2_dot: length mismatch");
  }
  int acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc ^= (a[i] & b[i] & 1);
  }
  return acc;
}

CssCode CssCode::four_one_two() {
  CssCode code;
  code.n = 4;
  code.k = 1;
  code.x_checks = {{1, 1, 1, 1}};
  code.z_checks = {{1, 1, 0, 0}, {0, 0, 1, 1}};
  code.logical_x = {{1, 1, 0, 0}};
  code.logical_z = {{1, 0, 1, 0}};
  return code;
}

CssCode CssCode::repetition(int n) {
  if (n < 2) throw DomainError("repetition: need n >= 2");
  CssCode code;
  code.n = n;
  code.k = 1;
  for (int i = 0; i + 1 < n; ++i) {
    BinaryRow row(static_cast<std::size_t>(n), 0);
    row[static_cast<std::size_t>(i)] = 1;
    row[static_cast<std::size_t>(i + 1)] = 1;
    code.z_checks.push_back(row);
  }
  code.logical_x = {BinaryRow(static_cast<std::size_t>(n), 1)};
  BinaryRow lz(static_cast<std::size_t>(n), 0);
  lz[0] = 1;
  code.logical_z = {lz};
  return code;
}

std::vector<std::string> validate_code(const CssCode& code) {
  std::vector<std::string> violations;
  const auto row_ok = [&](const BinaryRow& r) {
    return static_cast<int>(r.size()) == code.n;
  };
  const auto check_shape = [&](const BinaryMatrix& m, const char* name) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!row_ok(m[i])) {
        std::ostringstream msg;
        msg << name << " row " << i << " has length " << m[i].size()
            << ", expected n = " << code.n;
        violations.push_back(msg.str());
      }
    }
  };
  check_shape(code.x_checks, "x_checks");
  check_shape(code.z_checks, "z_checks");
  check_shape(code.logical_x, "logical_x");
  check_shape(code.logical_z, "logical_z");
  if (!violations.empty()) return violations;

  if (static_cast<int>(code.logical_x.size()) != code.k ||
      static_cast<int>(code.logical_z.size()) != code.k) {
    violations.push_back("number of logical operators does not match k");
    return violations;
  }

  for (std::size_t p = 0; p < code.x_checks.size(); ++p) {
    for (std::size_t q = 0; q < code.z_checks.size(); ++q) {
      if (mod2_dot(code.x_checks[p], code.z_checks[q]) != 0) {
        std::ostringstream msg;
        msg << "x_check " << p << " anticommutes with z_check " << q;
        violations.push_back(msg.str());
      }
    }
  }
  for (int l = 0; l < code.k; ++l) {
    for (std::size_t q = 0; q < code.z_checks.size(); ++q) {
      if (mod2_dot(code.logical_x[static_cast<std::size_t>(l)],
                   code.z_checks[q]) != 0) {
        std::ostringstream msg;
        msg << "logical_x " << l << " anticommutes with z_check " << q;
        violations.push_back(msg.str());
      }
    }
    for (std::size_t p = 0; p < code.x_checks.size(); ++p) {
      if (mod2_dot(code.logical_z[static_cast<std::size_t>(l)],
                   code.x_checks[p]) != 0) {
        std::ostringstream msg;
        msg << "logical_z " << l << " anticommutes with x_check " << p;
        violations.push_back(msg.str());
      }
    }
    for (int j = 0; j < code.k; ++j) {
      const int want = (j == l) ? 1 : 0;
      if (mod2_dot(code.logical_x[static_cast<std::size_t>(l)],
                   code.logical_z[static_cast<std::size_t>(j)]) != want) {
        std::ostringstream msg;
        msg << "logical_x " << l << " / logical_z " << j
            << (want ? " must anticommute" : " must commute");
        violations.push_back(msg.str());
      }
    }
  }
  return violations;
}

}  // namespace telenoise
