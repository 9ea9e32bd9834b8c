#ifndef NMM_VERSION_HPP
#define NMM_VERSION_HPP

namespace nmm {

inline constexpr const char* version_string = "0.1.0";

}

#endif
