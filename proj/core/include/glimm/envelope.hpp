#pragma once

#include <cstddef>
#include <vector>

namespace glimm {

struct SampledFunction {
  std::vector<double> grid;  // strictly increasing
  std::vector<double> values;
  std::size_t size() const { return grid.size(); }
};

struct EnvelopeResult {
  SampledFunction envelope;
  std::vector<char> contact;          // per node: envelope touches f
  std::vector<double> slope;          // per cell [i, i+1]
  std::vector<std::size_t> vertices;  // hull vertices (node indices)
  bool lower = true;                  // lower convex (true) or upper concave (false)
};

// Greatest convex minorant of the sampled points; one monotone sweep.
EnvelopeResult lower_convex_envelope(const SampledFunction& f);
// Least concave majorant; computed as -lower_convex_envelope(-f).
EnvelopeResult upper_concave_envelope(const SampledFunction& f);

enum class PieceKind { Rarefaction, ShockOrContact };

struct ContactPiece {
  std::size_t begin = 0;  // first node
  std::size_t end = 0;    // last node
  PieceKind kind = PieceKind::ShockOrContact;
  bool flat_contact = false;  // ShockOrContact with f on the envelope throughout
};

// Maximal pieces: Rarefaction where the slope strictly increases from cell to cell,
// ShockOrContact where it is constant. Slopes closer than strict_tol * (slope range)
// count as equal.
std::vector<ContactPiece> decompose_contact(const EnvelopeResult& env, double strict_tol = 1e-10);

}  // namespace glimm
