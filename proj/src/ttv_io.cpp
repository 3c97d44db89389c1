#include "ttortho/ttv_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "ttortho/errors.hpp"

namespace ttortho {

namespace {

constexpr char kMagic[4] = {'T', 'T', 'V', '1'};

template <class T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(bytes, sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::span<const char> bytes) : bytes_(bytes) {}

  template <class T>
  T get() {
    need(sizeof(T));
    char tmp[sizeof(T)];
    std::memcpy(tmp, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(tmp, tmp + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, tmp, sizeof(T));
    return value;
  }

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw FormatError("TTV1: truncated data");
  }

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  std::span<const char> rest() const noexcept { return bytes_.subspan(pos_); }

 private:
  std::span<const char> bytes_;
  std::size_t pos_ = 0;
};

TTVector read_record(Reader& in) {
  in.need(4);
  char magic[4];
  for (char& c : magic) c = in.get<char>();
  if (std::memcmp(magic, kMagic, 4) != 0) throw FormatError("TTV1: bad magic");
  const std::uint32_t d = in.get<std::uint32_t>();
  if (d == 0) throw FormatError("TTV1: order 0");
  // Header sizes are checked against the remaining bytes before anything is allocated.
  in.need(static_cast<std::size_t>(d) * 8 * 2 + 8);
  std::vector<std::uint64_t> n(d), r(d + 1);
  for (auto& v : n) v = in.get<std::uint64_t>();
  for (auto& v : r) v = in.get<std::uint64_t>();
  std::size_t total = 0;
  for (std::uint32_t k = 0; k < d; ++k) {
    const long double entries = static_cast<long double>(r[k]) * n[k] * r[k + 1];
    if (entries * 8 > static_cast<long double>(in.remaining()))
      throw FormatError("TTV1: core sizes exceed the available bytes");
    total += static_cast<std::size_t>(entries);
  }
  in.need(total * 8);
  std::vector<TTCore> cores;
  cores.reserve(d);
  for (std::uint32_t k = 0; k < d; ++k) {
    std::vector<double> data(r[k] * n[k] * r[k + 1]);
    for (double& v : data) v = in.get<double>();
    cores.emplace_back(r[k], n[k], r[k + 1], std::move(data));
  }
  try {
    return TTVector(std::move(cores));
  } catch (const ShapeError& e) {
    throw FormatError(std::string("TTV1: ") + e.what());
  }
}

void append_record(std::string& out, const TTVector& x) {
  out.append(kMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(x.order()));
  for (std::size_t n : x.mode_sizes()) put<std::uint64_t>(out, n);
  for (std::size_t r : x.ranks()) put<std::uint64_t>(out, r);
  for (const TTCore& c : x.cores())
    for (double v : c.data()) put<double>(out, v);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace

std::string encode_ttv(const TTVector& x) {
  std::string out;
  append_record(out, x);
  return out;
}

TTVector decode_ttv(std::span<const char> bytes) {
  Reader in(bytes);
  TTVector x = read_record(in);
  if (in.remaining() != 0) throw FormatError("TTV1: trailing bytes after the record");
  return x;
}

std::string encode_ttv_set(std::span<const TTVector> set) {
  std::string out;
  put<std::uint32_t>(out, static_cast<std::uint32_t>(set.size()));
  for (const TTVector& x : set) append_record(out, x);
  return out;
}

std::vector<TTVector> decode_ttv_set(std::span<const char> bytes) {
  Reader in(bytes);
  const std::uint32_t count = in.get<std::uint32_t>();
  std::vector<TTVector> set;
  for (std::uint32_t i = 0; i < count; ++i) set.push_back(read_record(in));
  if (in.remaining() != 0) throw FormatError("TTV1: trailing bytes after the last record");
  return set;
}

void save_ttv(const std::filesystem::path& path, const TTVector& x) {
  write_file(path, encode_ttv(x));
}

TTVector load_ttv(const std::filesystem::path& path) { return decode_ttv(read_file(path)); }

void save_ttv_set(const std::filesystem::path& path, std::span<const TTVector> set) {
  write_file(path, encode_ttv_set(set));
}

std::vector<TTVector> load_ttv_set(const std::filesystem::path& path) {
  return decode_ttv_set(read_file(path));
}

}  // namespace ttortho
