#pragma once

// MAP (multiply-add-permute) hyperdimensional algebra over bipolar vectors,
// codebook generation and persistence, and the exhaustive factorizer.
//
// Bit convention shared with the quantum side: element +1 <-> bit 0,
// element -1 <-> bit 1, so binding is XOR on bit strings.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdqf/rng.hpp"

namespace hdqf {

class Hypervector {
 public:
  Hypervector() = default;

  explicit Hypervector(std::vector<std::int8_t> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("hypervector dimension must be >= 1");
    for (auto e : elements_) {
      if (e != 1 && e != -1) throw std::invalid_argument("hypervector elements must be +1 or -1");
    }
  }

  Hypervector(std::initializer_list<int> elements)
      : Hypervector(std::vector<std::int8_t>(elements.begin(), elements.end())) {}

  static Hypervector ones(std::size_t dim) {
    return Hypervector(std::vector<std::int8_t>(dim, 1));
  }

  static Hypervector random(std::size_t dim, CounterRng& rng) {
    std::vector<std::int8_t> e(dim);
    for (auto& x : e) x = static_cast<std::int8_t>(rng.bipolar());
    return Hypervector(std::move(e));
  }

  [[nodiscard]] std::size_t dim() const noexcept { return elements_.size(); }
  [[nodiscard]] int operator[](std::size_t i) const { return elements_[i]; }
  [[nodiscard]] std::span<const std::int8_t> elements() const noexcept { return elements_; }

  [[nodiscard]] Hypervector operator-() const {
    Hypervector r = *this;
    for (auto& x : r.elements_) x = static_cast<std::int8_t>(-x);
    return r;
  }

  friend bool operator==(const Hypervector&, const Hypervector&) = default;

 private:
  std::vector<std::int8_t> elements_;
};

/// Unthresholded superposition; entries are bounded by the number of bundled vectors.
struct BundleVector {
  std::vector<int> elements;
  std::size_t constituents = 0;

  [[nodiscard]] std::size_t dim() const noexcept { return elements.size(); }
  friend bool operator==(const BundleVector&, const BundleVector&) = default;
};

using FactorAssignment = std::vector<std::size_t>;

inline void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("hypervector dimension mismatch");
}

// ---------------------------------------------------------------------------
// Codebooks

/// F x N x D bipolar tensor; row (f, i) is codevector i of factor f.
class CodebookSet {
 public:
  CodebookSet() = default;

  CodebookSet(std::size_t factors, std::size_t size, std::size_t dim, std::uint64_t seed,
              std::vector<std::int8_t> data)
      : factors_(factors), size_(size), dim_(dim), seed_(seed), data_(std::move(data)) {
    if (factors_ == 0 || size_ == 0 || dim_ == 0)
      throw std::invalid_argument("codebook shape must be positive");
    if (data_.size() != factors_ * size_ * dim_)
      throw std::invalid_argument("codebook tensor size does not match F*N*D");
    for (auto e : data_) {
      if (e != 1 && e != -1) throw std::invalid_argument("codebook entries must be +1 or -1");
    }
  }

  [[nodiscard]] std::size_t factors() const noexcept { return factors_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::span<const std::int8_t> tensor() const noexcept { return data_; }

  [[nodiscard]] std::span<const std::int8_t> row(std::size_t f, std::size_t i) const {
    if (f >= factors_ || i >= size_) throw std::out_of_range("codebook index out of range");
    return {data_.data() + (f * size_ + i) * dim_, dim_};
  }

  [[nodiscard]] Hypervector codevector(std::size_t f, std::size_t i) const {
    auto r = row(f, i);
    return Hypervector(std::vector<std::int8_t>(r.begin(), r.end()));
  }

  /// True when no factor holds two identical rows.
  [[nodiscard]] bool rows_distinct() const {
    for (std::size_t f = 0; f < factors_; ++f) {
      for (std::size_t i = 0; i < size_; ++i) {
        for (std::size_t j = i + 1; j < size_; ++j) {
          auto a = row(f, i);
          auto b = row(f, j);
          if (std::equal(a.begin(), a.end(), b.begin())) return false;
        }
      }
    }
    return true;
  }

  friend bool operator==(const CodebookSet&, const CodebookSet&) = default;

 private:
  std::size_t factors_ = 0;
  std::size_t size_ = 0;
  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::int8_t> data_;
};

/// Entries are i.i.d. fair bipolar draws in (f, i, d) order from CounterRng(seed).
/// Duplicate rows are kept.
inline CodebookSet gen_codebooks(std::uint64_t seed, std::size_t factors, std::size_t size,
                                 std::size_t dim) {
  if (factors == 0 || size == 0 || dim == 0)
    throw std::invalid_argument("codebook shape must be positive");
  CounterRng rng(seed);
  std::vector<std::int8_t> data(factors * size * dim);
  for (auto& x : data) x = static_cast<std::int8_t>(rng.bipolar());
  return {factors, size, dim, seed, std::move(data)};
}

// ---------------------------------------------------------------------------
// Algebra

inline Hypervector bind(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a.dim(), b.dim());
  std::vector<std::int8_t> r(a.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::int8_t>(a[i] * b[i]);
  return Hypervector(std::move(r));
}

inline Hypervector bind_all(const FactorAssignment& assignment, const CodebookSet& books) {
  if (assignment.size() != books.factors())
    throw std::invalid_argument("assignment length must equal the number of factors");
  std::vector<std::int8_t> r(books.dim(), 1);
  for (std::size_t f = 0; f < assignment.size(); ++f) {
    auto row = books.row(f, assignment[f]);
    for (std::size_t d = 0; d < r.size(); ++d) r[d] = static_cast<std::int8_t>(r[d] * row[d]);
  }
  return Hypervector(std::move(r));
}

inline BundleVector bundle(std::span<const Hypervector> vs) {
  if (vs.empty()) throw std::invalid_argument("cannot bundle an empty list");
  BundleVector out{std::vector<int>(vs.front().dim(), 0), vs.size()};
  for (const auto& v : vs) {
    require_same_dim(v.dim(), out.dim());
    for (std::size_t i = 0; i < v.dim(); ++i) out.elements[i] += v[i];
  }
  return out;
}

/// Sign threshold of a bundle; zero sums map to +1.
inline Hypervector sign_threshold(const BundleVector& b) {
  std::vector<std::int8_t> r(b.dim());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b.elements[i] >= 0 ? 1 : -1;
  return Hypervector(std::move(r));
}

/// Circular shift: result[i] = h[(i - k) mod D].
inline Hypervector permute(const Hypervector& h, long long k) {
  const auto dim = static_cast<long long>(h.dim());
  const long long shift = ((k % dim) + dim) % dim;
  std::vector<std::int8_t> r(h.dim());
  for (long long i = 0; i < dim; ++i) r[static_cast<std::size_t>((i + shift) % dim)] =
      static_cast<std::int8_t>(h[static_cast<std::size_t>(i)]);
  return Hypervector(std::move(r));
}

inline double similarity(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a.dim(), b.dim());
  long long dot = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a[i] * b[i];
  return static_cast<double>(dot) / static_cast<double>(a.dim());
}

// ---------------------------------------------------------------------------
// Bit encoding

/// One byte per element, 0 for +1 and 1 for -1.
using BitString = std::vector<std::uint8_t>;

inline BitString bipolar_to_bits(const Hypervector& h) {
  BitString bits(h.dim());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = h[i] < 0 ? 1 : 0;
  return bits;
}

inline Hypervector bits_to_bipolar(const BitString& bits) {
  std::vector<std::int8_t> r(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw std::invalid_argument("bit string entries must be 0 or 1");
    r[i] = bits[i] ? -1 : 1;
  }
  return Hypervector(std::move(r));
}

/// Element 0 first, e.g. (1,-1,1) -> "010".
inline std::string to_string(const BitString& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

inline BitString bits_from_string(std::string_view s) {
  BitString bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bit string must contain 0/1 only");
    bits[i] = s[i] == '1';
  }
  return bits;
}

/// Packs a row of at most 64 bipolar entries: bit d is set when entry d is -1.
inline std::uint64_t pack_row(std::span<const std::int8_t> row) {
  if (row.size() > 64) throw std::invalid_argument("packed rows hold at most 64 entries");
  std::uint64_t word = 0;
  for (std::size_t d = 0; d < row.size(); ++d) {
    if (row[d] < 0) word |= std::uint64_t{1} << d;
  }
  return word;
}

inline std::uint64_t pack_row(const Hypervector& h) { return pack_row(h.elements()); }

inline Hypervector unpack_row(std::uint64_t word, std::size_t dim) {
  std::vector<std::int8_t> r(dim);
  for (std::size_t d = 0; d < dim; ++d) r[d] = (word >> d) & 1U ? -1 : 1;
  return Hypervector(std::move(r));
}

// ---------------------------------------------------------------------------
// Exhaustive factorization

enum class SearchMode { kOracle, kFirstHit };

struct BruteForceResult {
  std::vector<FactorAssignment> assignments;  // lexicographic order
  std::uint64_t comparisons = 0;
};

namespace detail {

/// Multi-word packed rows so the enumeration works for any D.
struct PackedBooks {
  std::size_t words = 0;
  std::vector<std::uint64_t> data;  // (f, i, w)

  explicit PackedBooks(const CodebookSet& books) : words((books.dim() + 63) / 64) {
    data.assign(books.factors() * books.size() * words, 0);
    for (std::size_t f = 0; f < books.factors(); ++f) {
      for (std::size_t i = 0; i < books.size(); ++i) {
        auto r = books.row(f, i);
        auto* out = data.data() + (f * books.size() + i) * words;
        for (std::size_t d = 0; d < r.size(); ++d) {
          if (r[d] < 0) out[d / 64] |= std::uint64_t{1} << (d % 64);
        }
      }
    }
  }
};

}  // namespace detail

/// Enumerates all N^F assignments in lexicographic order (factor 0 varies slowest).
/// kOracle visits every candidate; kFirstHit stops at the first match and counts
/// the evaluations performed, the matching one included.
inline BruteForceResult brute_force_factorize(const Hypervector& target, const CodebookSet& books,
                                              SearchMode mode = SearchMode::kOracle) {
  require_same_dim(target.dim(), books.dim());
  const detail::PackedBooks packed(books);
  const std::size_t words = packed.words;
  const std::size_t factors = books.factors();
  const std::size_t size = books.size();

  std::vector<std::uint64_t> want(words, 0);
  for (std::size_t d = 0; d < target.dim(); ++d) {
    if (target[d] < 0) want[d / 64] |= std::uint64_t{1} << (d % 64);
  }

  // partial[f] holds the XOR of the rows chosen for factors < f.
  std::vector<std::uint64_t> partial((factors + 1) * words, 0);
  FactorAssignment idx(factors, 0);
  BruteForceResult result;

  std::size_t level = 0;
  auto row_ptr = [&](std::size_t f, std::size_t i) { return packed.data.data() + (f * size + i) * words; };
  auto refresh = [&](std::size_t f) {
    const auto* r = row_ptr(f, idx[f]);
    for (std::size_t w = 0; w < words; ++w) partial[(f + 1) * words + w] = partial[f * words + w] ^ r[w];
  };
  for (level = 0; level < factors; ++level) refresh(level);

  while (true) {
    ++result.comparisons;
    if (std::equal(want.begin(), want.end(), partial.begin() + static_cast<std::ptrdiff_t>(factors * words))) {
      result.assignments.push_back(idx);
      if (mode == SearchMode::kFirstHit) return result;
    }
    // Odometer increment, last factor fastest.
    std::size_t f = factors;
    while (f > 0) {
      --f;
      if (++idx[f] < size) break;
      idx[f] = 0;
      if (f == 0) return result;
    }
    for (std::size_t g = f; g < factors; ++g) refresh(g);
  }
}

// ---------------------------------------------------------------------------
// Codebook file: 24-byte little-endian header followed by bit-packed rows.
//   magic "HDQF" | version u16 | F u16 | N u32 | D u32 | seed u64
// Each row of D entries occupies ceil(D/8) bytes, entry d in bit (d % 8) of
// byte d / 8, bit set meaning -1. Rows follow in (f, i) order.

inline constexpr std::uint16_t kCodebookFormatVersion = 1;

namespace detail {

template <typename T>
void put_le(std::ostream& os, T value) {
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    os.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * b)) & 0xFFU));
  }
}

template <typename T>
T get_le(std::istream& is) {
  std::uint64_t v = 0;
  for (std::size_t b = 0; b < sizeof(T); ++b) {
    const int c = is.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("codebook file truncated");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return static_cast<T>(v);
}

}  // namespace detail

inline void write_codebooks(std::ostream& os, const CodebookSet& books) {
  if (books.factors() > 0xFFFF) throw std::invalid_argument("F does not fit the u16 header field");
  os.write("HDQF", 4);
  detail::put_le<std::uint16_t>(os, kCodebookFormatVersion);
  detail::put_le<std::uint16_t>(os, static_cast<std::uint16_t>(books.factors()));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(books.size()));
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(books.dim()));
  detail::put_le<std::uint64_t>(os, books.seed());
  const std::size_t row_bytes = (books.dim() + 7) / 8;
  std::vector<char> buf(row_bytes);
  for (std::size_t f = 0; f < books.factors(); ++f) {
    for (std::size_t i = 0; i < books.size(); ++i) {
      std::fill(buf.begin(), buf.end(), 0);
      auto r = books.row(f, i);
      for (std::size_t d = 0; d < r.size(); ++d) {
        if (r[d] < 0) buf[d / 8] = static_cast<char>(buf[d / 8] | (1 << (d % 8)));
      }
      os.write(buf.data(), static_cast<std::streamsize>(row_bytes));
    }
  }
  if (!os) throw std::runtime_error("failed writing codebook file");
}

inline CodebookSet read_codebooks(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "HDQF", 4) != 0) throw std::runtime_error("bad codebook magic");
  const auto version = detail::get_le<std::uint16_t>(is);
  if (version != kCodebookFormatVersion) throw std::runtime_error("unsupported codebook version");
  const std::size_t factors = detail::get_le<std::uint16_t>(is);
  const std::size_t size = detail::get_le<std::uint32_t>(is);
  const std::size_t dim = detail::get_le<std::uint32_t>(is);
  const auto seed = detail::get_le<std::uint64_t>(is);
  if (factors == 0 || size == 0 || dim == 0) throw std::runtime_error("codebook shape must be positive");
  const std::size_t row_bytes = (dim + 7) / 8;
  std::vector<std::int8_t> data(factors * size * dim);
  std::vector<char> buf(row_bytes);
  for (std::size_t r = 0; r < factors * size; ++r) {
    is.read(buf.data(), static_cast<std::streamsize>(row_bytes));
    if (!is) throw std::runtime_error("codebook file truncated");
    for (std::size_t d = 0; d < dim; ++d) {
      data[r * dim + d] = (static_cast<unsigned char>(buf[d / 8]) >> (d % 8)) & 1U ? -1 : 1;
    }
  }
  return {factors, size, dim, seed, std::move(data)};
}

inline void save_codebooks(const std::string& path, const CodebookSet& books) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_codebooks(os, books);
}

inline CodebookSet load_codebooks(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_codebooks(is);
}

}  // namespace hdqf
