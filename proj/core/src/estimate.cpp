#include "fouvol/estimate.hpp"

#include <stdexcept>
#include <string>

namespace fouvol {

std::string_view to_string(Method m) {
  switch (m) {
    case Method::simple:
      return "simple";
    case Method::cv:
      return "cv";
    case Method::mcvr:
      return "mcvr";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "simple") return Method::simple;
  if (name == "cv") return Method::cv;
  if (name == "mcvr") return Method::mcvr;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected simple, cv or mcvr)");
}

}  // namespace fouvol
