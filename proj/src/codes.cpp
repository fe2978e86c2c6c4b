#include "muspec/codes.hpp"

#include <bit>
#include <cmath>

namespace muspec {

double binary_entropy(double x) {
  if (!(x > 0.0 && x < 1.0)) throw Error(Errc::BadInput, "binary_entropy needs x in (0,1)");
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

int min_k0() {
  for (int k = 2;; ++k) {
    if ((1.0 - binary_entropy(1.0 / static_cast<double>(k))) * static_cast<double>(k) >= 1.0)
      return k;
  }
}

int hamming(std::string_view w1, std::string_view w2) {
  if (w1.size() < w2.size()) std::swap(w1, w2);
  int dist = 0;
  for (size_t i = 0; i < w1.size(); ++i) {
    const char c2 = i < w2.size() ? w2[i] : '0';
    if (w1[i] != c2) ++dist;
  }
  return dist;
}

namespace {

std::string to_bits(std::uint64_t v, int length) {
  std::string s(length, '0');
  for (int i = 0; i < length; ++i)
    if (v >> (length - 1 - i) & 1) s[i] = '1';
  return s;
}

}  // namespace

Codebook gv_greedy(int length, int min_dist, long long size_target) {
  if (length < 1 || min_dist < 1 || min_dist > length)
    throw Error(Errc::BadInput, "need 1 <= min_dist <= length");
  if (size_target < 1) throw Error(Errc::BadInput, "size_target must be >= 1");
  if (length > 63) throw Error(Errc::TooLarge, "code length > 63 unsupported");

  // Lexicographic order on fixed-length bit strings == numeric order with the
  // most significant bit first.
  const std::uint64_t end = 1ull << length;
  std::vector<std::uint64_t> admitted;
  for (std::uint64_t v = 0; v < end; ++v) {
    bool ok = true;
    for (auto it = admitted.rbegin(); it != admitted.rend(); ++it) {
      if (std::popcount(v ^ *it) < min_dist) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    admitted.push_back(v);
    if (static_cast<long long>(admitted.size()) >= size_target) break;
  }
  if (static_cast<long long>(admitted.size()) < size_target)
    throw Error(Errc::Unreachable, "greedy exhausted at size " + std::to_string(admitted.size()) +
                                       " < target " + std::to_string(size_target));

  Codebook cb;
  cb.length = length;
  cb.min_dist = min_dist;
  cb.words.reserve(admitted.size());
  for (std::uint64_t v : admitted) cb.words.push_back(to_bits(v, length));
  return cb;
}

bool verify_code(const Codebook& cb) {
  for (const auto& w : cb.words)
    if (static_cast<int>(w.size()) != cb.length) return false;
  for (size_t i = 0; i < cb.words.size(); ++i)
    for (size_t j = i + 1; j < cb.words.size(); ++j) {
      if (cb.words[i] == cb.words[j]) return false;
      if (hamming(cb.words[i], cb.words[j]) < cb.min_dist) return false;
    }
  return true;
}

}  // namespace muspec
