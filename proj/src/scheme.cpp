#include "sacfv/scheme.hpp"

namespace sacfv {

Variant parse_variant(std::string_view name) {
  if (name == "splitting") return Variant::splitting;
  if (name == "coupled") return Variant::coupled;
  if (name == "heat") return Variant::heat;
  throw ConfigError("unknown variant '" + std::string(name) + "' (expected splitting, coupled or heat)");
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::coupled:
      return "coupled";
    case Variant::heat:
      return "heat";
    case Variant::splitting:
      break;
  }
  return "splitting";
}

}  // namespace sacfv
