#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace ixrl {

// 64-bit FNV-1a content fingerprint. Used for provenance chaining between
// pipeline files, not for anything adversarial.
class Fingerprint {
public:
    void update(std::string_view bytes) noexcept;
    void update_u64(std::uint64_t v) noexcept;
    std::uint64_t value() const noexcept { return state_; }
    std::string hex() const;

private:
    std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string fingerprint_hex(std::string_view bytes);
std::string fingerprint_file(const std::filesystem::path& path);

// splitmix64 finalizer; used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace ixrl
