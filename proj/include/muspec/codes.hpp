#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "muspec/common.hpp"

namespace muspec {

/// A binary code with a guaranteed minimum Hamming distance.
struct Codebook {
  int length = 0;
  int min_dist = 0;
  std::vector<std::string> words;  // '0'/'1' strings of the stated length
};

/// H(x) = -x log2 x - (1-x) log2(1-x) on (0,1).
double binary_entropy(double x);

/// Smallest k >= 2 with (1 - H(1/k)) k >= 1. This pins the code rate the
/// Gilbert-Varshamov argument needs, and equals 5.
int min_k0();

/// Hamming distance; the shorter word is padded with '0'.
int hamming(std::string_view w1, std::string_view w2);

/// Greedy lexicographic code construction: scan binary words in increasing
/// order, admit a word iff it is at distance >= min_dist from everything
/// admitted so far, stop at size_target. The GV counting argument guarantees
/// 2^n words whenever length = k n, min_dist = n, k >= min_k0().
/// Throws Unreachable if the scan exhausts all words first, TooLarge for
/// length > 63 (words are enumerated as machine integers).
Codebook gv_greedy(int length, int min_dist, long long size_target);

/// Brute-force check of the pairwise minimum-distance invariant.
bool verify_code(const Codebook& cb);

}  // namespace muspec
