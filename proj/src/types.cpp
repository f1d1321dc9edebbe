#include "linkinfer/types.hpp"

#include <cctype>

namespace linkinfer {

UserPair UserPair::of(UserId a, UserId b) {
  if (a == b) throw std::invalid_argument("user pair endpoints must be distinct: " + std::to_string(raw(a)));
  return a < b ? UserPair{a, b} : UserPair{b, a};
}

char modality_letter(Modality m) noexcept {
  constexpr std::array<char, kModalityCount> letters{'H', 'T', 'I', 'L', 'E'};
  return letters[index_of(m)];
}

std::string_view modality_name(Modality m) noexcept {
  constexpr std::array<std::string_view, kModalityCount> names{"hashtag", "text", "image", "location",
                                                               "network"};
  return names[index_of(m)];
}

Modality modality_from_letter(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'H': return Modality::Hashtag;
    case 'T': return Modality::Text;
    case 'I': return Modality::Image;
    case 'L': return Modality::Location;
    case 'E': return Modality::Network;
    default: throw std::invalid_argument(std::string("unknown modality letter '") + c + "'");
  }
}

}  // namespace linkinfer
