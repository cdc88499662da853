#include "ixrl/hash.hpp"

#include "ixrl/errors.hpp"

#include <array>
#include <cstdio>
#include <fstream>

namespace ixrl {

void Fingerprint::update(std::string_view bytes) noexcept {
    for (unsigned char c : bytes) {
        state_ ^= c;
        state_ *= 0x100000001b3ULL;
    }
}

void Fingerprint::update_u64(std::uint64_t v) noexcept {
    for (int i = 0; i < 8; ++i) {
        state_ ^= (v >> (8 * i)) & 0xffU;
        state_ *= 0x100000001b3ULL;
    }
}

std::string Fingerprint::hex() const {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(state_));
    return std::string(buf.data());
}

std::string fingerprint_hex(std::string_view bytes) {
    Fingerprint fp;
    fp.update(bytes);
    return fp.hex();
}

std::string fingerprint_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    Fingerprint fp;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        fp.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
    }
    return fp.hex();
}

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace ixrl
