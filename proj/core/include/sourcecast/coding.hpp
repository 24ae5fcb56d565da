/**
 * \file coding.hpp
 *
 * Binary-extension-field arithmetic, Vandermonde source-matrix construction,
 * per-receiver rank verification and the end-to-end encode/forward/decode
 * simulation over a constructed multicast subgraph. All coding happens at the
 * source; intermediate nodes forward symbols unchanged, one symbol per zone.
 */
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "sourcecast/graph.hpp"
#include "sourcecast/online.hpp"

namespace sourcecast {

struct FieldSpec {
  unsigned degree = 8;  // GF(2^degree), degree 8 or 16

  static FieldSpec gf8() { return FieldSpec{8}; }
  static FieldSpec gf16() { return FieldSpec{16}; }
};

// GF(2^8) with polynomial 0x11D, GF(2^16) with 0x1100B.
class GaloisField {
 public:
  explicit GaloisField(FieldSpec spec);

  unsigned degree() const { return degree_; }
  std::uint32_t size() const { return 1u << degree_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t pow(std::uint32_t a, std::uint32_t e) const;
  std::uint32_t inv(std::uint32_t a) const;  // throws std::domain_error on 0

 private:
  unsigned degree_;
  std::uint32_t poly_;
  std::vector<std::uint8_t> mul8_;  // dense 256x256 table for degree 8
};

class field_too_small_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class no_feasible_code_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class undecodable_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Per-zone evaluation points and coding vectors; rows of the source matrix G.
// build_assignment produces the Vandermonde rows g_z = (a_z^0, ..., a_z^{K-1})
// with a_z = z + 1; the struct also admits hand-built row sets.
struct SourceCodeAssignment {
  FieldSpec field;
  std::uint32_t k = 0;                                   // group flow
  std::vector<ColorId> zones;                            // dense zone ids
  std::vector<std::uint32_t> eval_points;                // a_z, pairwise distinct
  std::vector<std::vector<std::uint32_t>> coding_vectors;  // g_z, length k
};

struct SymbolBlock {
  std::vector<std::uint32_t> x;  // K base symbols
};

struct ReceiverObservation {
  NodeId receiver = 0;
  std::vector<std::pair<ColorId, std::uint32_t>> received;  // (zone, y_zone)
};

// K = min_i |C_i|. Throws no_feasible_code_error when K = 0 and
// field_too_small_error when the zone count exceeds q - 1 (distinct nonzero
// evaluation points run out; the message suggests GF(2^16)).
SourceCodeAssignment build_assignment(const OnlineResult& result, FieldSpec field);

// Rank of the rows selected by zone_set, computed by elimination over the
// field. Throws std::invalid_argument on an unknown zone id.
std::uint32_t receiver_rank(const SourceCodeAssignment& assignment,
                            std::span<const ColorId> zone_set);

// Computes y_z = g_z^T X once per zone, walks every receiver path asserting
// all its edges carry the path's zone, and delivers (zone, y_zone) per path.
std::vector<ReceiverObservation> simulate_round(const DirectedMultigraph& g,
                                                const OnlineResult& result,
                                                const SourceCodeAssignment& assignment,
                                                const SymbolBlock& x);

// Solves the observed linear system exactly. Throws undecodable_error naming
// the receiver when the observation is rank-deficient.
SymbolBlock decode(const SourceCodeAssignment& assignment, const ReceiverObservation& obs);

}  // namespace sourcecast
