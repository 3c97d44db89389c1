#pragma once

// TTV1 binary container, all fields little-endian:
//   "TTV1" | u32 d | u64 n_1..n_d | u64 r_0..r_d | f64 core data, cores 1..d in core layout
// A set file is a u32 count followed by that many TTV1 records.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ttortho/tt.hpp"

namespace ttortho {

std::string encode_ttv(const TTVector& x);
/// Decodes exactly one record; FormatError unless `bytes` is exactly one record long.
TTVector decode_ttv(std::span<const char> bytes);

std::string encode_ttv_set(std::span<const TTVector> set);
std::vector<TTVector> decode_ttv_set(std::span<const char> bytes);

void save_ttv(const std::filesystem::path& path, const TTVector& x);
TTVector load_ttv(const std::filesystem::path& path);
void save_ttv_set(const std::filesystem::path& path, std::span<const TTVector> set);
std::vector<TTVector> load_ttv_set(const std::filesystem::path& path);

}  // namespace ttortho
