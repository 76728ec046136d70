#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace akg {

// FNV-1a, 64 bit. Used for snapshot checksums; not cryptographic.
inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

inline std::string digest(std::string_view bytes) { return hex64(fnv1a64(bytes)); }

}  // namespace akg
