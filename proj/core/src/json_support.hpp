#pragma once

#include <json.hpp>

#include "dickson/certificate.hpp"
#include "dickson/nat.hpp"

namespace dickson::detail {

using Json = nlohmann::json;

inline Json nat_json(const Nat& n) {
  if (n <= Nat(std::numeric_limits<std::uint64_t>::max())) return Json(static_cast<std::uint64_t>(n));
  return Json(n.str());
}

inline Nat json_nat(const Json& j, const char* field) {
  if (j.is_number_unsigned()) return Nat(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return Nat(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) return Nat(s);
  }
  throw FormatError(std::string("field '") + field + "' is not a natural number");
}

Json certificate_json(const BoundCertificate& cert);

inline std::string canonical(const Json& j) { return j.dump(); }

}  // namespace dickson::detail
