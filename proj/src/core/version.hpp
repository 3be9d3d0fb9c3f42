#ifndef DUNEDRIFT_CORE_VERSION_HPP
#define DUNEDRIFT_CORE_VERSION_HPP

namespace dunedrift {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dunedrift

#endif
