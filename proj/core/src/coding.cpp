#include "sourcecast/coding.hpp"

#include <algorithm>
#include <string>

namespace sourcecast {

namespace {

std::uint32_t poly_for_degree(unsigned degree) {
  switch (degree) {
    case 8:
      return 0x11D;
    case 16:
      return 0x1100B;
    default:
      throw std::invalid_argument("field degree must be 8 or 16");
  }
}

std::uint32_t clmul_reduce(std::uint32_t a, std::uint32_t b, std::uint32_t poly,
                           unsigned degree) {
  std::uint32_t r = 0;
  const std::uint32_t high = 1u << degree;
  while (b != 0) {
    if (b & 1u) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & high) a ^= poly;
  }
  return r;
}

}  // namespace

GaloisField::GaloisField(FieldSpec spec)
    : degree_(spec.degree), poly_(poly_for_degree(spec.degree)) {
  if (degree_ == 8) {
    mul8_.resize(256 * 256);
    for (std::uint32_t a = 0; a < 256; ++a) {
      for (std::uint32_t b = a; b < 256; ++b) {
        auto v = static_cast<std::uint8_t>(clmul_reduce(a, b, poly_, 8));
        mul8_[a * 256 + b] = v;
        mul8_[b * 256 + a] = v;
      }
    }
  }
}

std::uint32_t GaloisField::mul(std::uint32_t a, std::uint32_t b) const {
  if (degree_ == 8) return mul8_[a * 256 + b];
  return clmul_reduce(a, b, poly_, degree_);
}

std::uint32_t GaloisField::pow(std::uint32_t a, std::uint32_t e) const {
  std::uint32_t result = 1;
  std::uint32_t base = a;
  while (e != 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

std::uint32_t GaloisField::inv(std::uint32_t a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return pow(a, size() - 2);
}

SourceCodeAssignment build_assignment(const OnlineResult& result, FieldSpec field) {
  const auto t = throughput(result);
  if (t.group_k == 0) {
    throw no_feasible_code_error("group flow is zero: no feasible code");
  }
  GaloisField gf(field);
  if (result.zone_count > gf.size() - 1) {
    std::string msg = "field too small: " + std::to_string(result.zone_count) +
                      " zones need more than " + std::to_string(gf.size() - 1) +
                      " distinct nonzero evaluation points";
    if (field.degree == 8) msg += "; retry with GF(2^16)";
    throw field_too_small_error(msg);
  }
  SourceCodeAssignment assignment;
  assignment.field = field;
  assignment.k = t.group_k;
  for (ColorId z = 0; z < result.zone_count; ++z) {
    const std::uint32_t alpha = z + 1;
    assignment.zones.push_back(z);
    assignment.eval_points.push_back(alpha);
    std::vector<std::uint32_t> row(assignment.k);
    for (std::uint32_t j = 0; j < assignment.k; ++j) row[j] = gf.pow(alpha, j);
    assignment.coding_vectors.push_back(std::move(row));
  }
  return assignment;
}

namespace {

// Row echelon over the field; returns rank. rhs (if present) is eliminated
// alongside and back-substituted into solution.
std::uint32_t eliminate(const GaloisField& gf, std::vector<std::vector<std::uint32_t>>& rows,
                        std::vector<std::uint32_t>* rhs, std::uint32_t cols,
                        std::vector<std::uint32_t>* solution) {
  std::uint32_t rank = 0;
  std::vector<std::uint32_t> pivot_col_of_row;
  for (std::uint32_t col = 0; col < cols && rank < rows.size(); ++col) {
    std::uint32_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    if (rhs) std::swap((*rhs)[pivot], (*rhs)[rank]);
    const std::uint32_t inv_p = gf.inv(rows[rank][col]);
    for (std::uint32_t c = col; c < cols; ++c) rows[rank][c] = gf.mul(rows[rank][c], inv_p);
    if (rhs) (*rhs)[rank] = gf.mul((*rhs)[rank], inv_p);
    for (std::uint32_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const std::uint32_t factor = rows[r][col];
      for (std::uint32_t c = col; c < cols; ++c) {
        rows[r][c] = gf.add(rows[r][c], gf.mul(factor, rows[rank][c]));
      }
      if (rhs) (*rhs)[r] = gf.add((*rhs)[r], gf.mul(factor, (*rhs)[rank]));
    }
    pivot_col_of_row.push_back(col);
    ++rank;
  }
  if (solution) {
    solution->assign(cols, 0);
    for (std::uint32_t r = 0; r < rank; ++r) {
      (*solution)[pivot_col_of_row[r]] = (*rhs)[r];
    }
  }
  return rank;
}

}  // namespace

std::uint32_t receiver_rank(const SourceCodeAssignment& assignment,
                            std::span<const ColorId> zone_set) {
  std::vector<std::vector<std::uint32_t>> rows;
  for (ColorId z : zone_set) {
    auto it = std::find(assignment.zones.begin(), assignment.zones.end(), z);
    if (it == assignment.zones.end()) {
      throw std::invalid_argument("unknown zone id " + std::to_string(z));
    }
    rows.push_back(assignment.coding_vectors[it - assignment.zones.begin()]);
  }
  if (rows.empty()) return 0;
  GaloisField gf(assignment.field);
  return eliminate(gf, rows, nullptr, assignment.k, nullptr);
}

std::vector<ReceiverObservation> simulate_round(const DirectedMultigraph& g,
                                                const OnlineResult& result,
                                                const SourceCodeAssignment& assignment,
                                                const SymbolBlock& x) {
  if (x.x.size() != assignment.k) {
    throw std::invalid_argument("symbol block length differs from K");
  }
  if (result.labeling.edge_count() != g.edge_count()) {
    throw std::invalid_argument("result does not belong to this graph");
  }
  GaloisField gf(assignment.field);
  // One symbol per zone; every edge of a zone carries the same mixture.
  std::vector<std::uint32_t> y(assignment.zones.size(), 0);
  for (std::size_t zi = 0; zi < assignment.zones.size(); ++zi) {
    std::uint32_t acc = 0;
    for (std::uint32_t j = 0; j < assignment.k; ++j) {
      acc = gf.add(acc, gf.mul(assignment.coding_vectors[zi][j], x.x[j]));
    }
    y[zi] = acc;
  }
  auto zone_index = [&](ColorId z) -> std::size_t {
    auto it = std::find(assignment.zones.begin(), assignment.zones.end(), z);
    if (it == assignment.zones.end()) {
      throw std::invalid_argument("result zone " + std::to_string(z) +
                                  " missing from assignment");
    }
    return static_cast<std::size_t>(it - assignment.zones.begin());
  };

  std::vector<ReceiverObservation> observations;
  for (std::size_t i = 0; i < result.receivers.size(); ++i) {
    ReceiverObservation obs;
    obs.receiver = result.receivers[i];
    const auto& paths = result.per_receiver_paths[i];
    const auto& colors = result.per_receiver_colors[i];
    for (std::size_t j = 0; j < paths.size(); ++j) {
      for (EdgeId e : paths[j]) {
        auto c = result.labeling.color_of(e);
        if (!c || *c != colors[j]) {
          throw internal_error("path of receiver " + std::to_string(obs.receiver) +
                               " spans two zones at edge " + std::to_string(e));
        }
      }
      obs.received.emplace_back(colors[j], y[zone_index(colors[j])]);
    }
    observations.push_back(std::move(obs));
  }
  return observations;
}

SymbolBlock decode(const SourceCodeAssignment& assignment, const ReceiverObservation& obs) {
  const std::uint32_t k = assignment.k;
  if (obs.received.size() < k) {
    throw undecodable_error("receiver " + std::to_string(obs.receiver) + " observes " +
                            std::to_string(obs.received.size()) + " zones, needs " +
                            std::to_string(k));
  }
  std::vector<std::vector<std::uint32_t>> rows;
  std::vector<std::uint32_t> rhs;
  for (const auto& [zone, symbol] : obs.received) {
    auto it = std::find(assignment.zones.begin(), assignment.zones.end(), zone);
    if (it == assignment.zones.end()) {
      throw std::invalid_argument("unknown zone id " + std::to_string(zone));
    }
    rows.push_back(assignment.coding_vectors[it - assignment.zones.begin()]);
    rhs.push_back(symbol);
  }
  GaloisField gf(assignment.field);
  SymbolBlock solution;
  const std::uint32_t rank = eliminate(gf, rows, &rhs, k, &solution.x);
  if (rank < k) {
    throw undecodable_error("receiver " + std::to_string(obs.receiver) +
                            " observation is rank-deficient (rank " + std::to_string(rank) +
                            " < K " + std::to_string(k) + ")");
  }
  return solution;
}

}  // namespace sourcecast
