#include "font.hpp"

#include <array>
#include <cctype>

namespace mocr::render::detail {
namespace {

// Fourteen-segment layout. Segment bit k lights the k-th entry of kSegments.
//
//    --A--
//   |\ | /|
//   F H I J B
//   |  \|/ |
//    G1 + G2
//   |  /|\ |
//   E K L M C
//   |/  |  \|
//    --D--
constexpr double kW = 0.6;
constexpr double kMidX = 0.3;
constexpr double kMidY = 0.5;

struct Segment {
  Vec2 a;
  Vec2 b;
};

constexpr std::array<Segment, 14> kSegments = {{
    {{0, 0}, {kW, 0}},          // A
    {{kW, 0}, {kW, kMidY}},     // B
    {{kW, kMidY}, {kW, 1}},     // C
    {{0, 1}, {kW, 1}},          // D
    {{0, kMidY}, {0, 1}},       // E
    {{0, 0}, {0, kMidY}},       // F
    {{0, kMidY}, {kMidX, kMidY}},   // G1
    {{kMidX, kMidY}, {kW, kMidY}},  // G2
    {{0, 0}, {kMidX, kMidY}},   // H
    {{kMidX, 0}, {kMidX, kMidY}},   // I
    {{kW, 0}, {kMidX, kMidY}},  // J
    {{kMidX, kMidY}, {0, 1}},   // K
    {{kMidX, kMidY}, {kMidX, 1}},   // L
    {{kMidX, kMidY}, {kW, 1}},  // M
}};

enum Bits : unsigned {
  A = 1u << 0,
  B = 1u << 1,
  C = 1u << 2,
  D = 1u << 3,
  E = 1u << 4,
  F = 1u << 5,
  G1 = 1u << 6,
  G2 = 1u << 7,
  H = 1u << 8,
  I = 1u << 9,
  J = 1u << 10,
  K = 1u << 11,
  L = 1u << 12,
  M = 1u << 13,
};

unsigned mask_for(char c) {
  switch (c) {
    case '0': return A | B | C | D | E | F;
    case '1': return B | C;
    case '2': return A | B | G1 | G2 | E | D;
    case '3': return A | B | C | D | G2;
    case '4': return F | G1 | G2 | B | C;
    case '5': return A | F | G1 | G2 | C | D;
    case '6': return A | F | E | D | C | G1 | G2;
    case '7': return A | B | C;
    case '8': return A | B | C | D | E | F | G1 | G2;
    case '9': return A | B | C | D | F | G1 | G2;
    case 'A': return A | B | C | E | F | G1 | G2;
    case 'B': return A | B | C | D | G2 | I | L;
    case 'C': return A | D | E | F;
    case 'D': return A | B | C | D | I | L;
    case 'E': return A | D | E | F | G1 | G2;
    case 'F': return A | E | F | G1 | G2;
    case 'G': return A | C | D | E | F | G2;
    case 'H': return B | C | E | F | G1 | G2;
    case 'I': return A | D | I | L;
    case 'J': return B | C | D | E;
    case 'K': return E | F | G1 | J | M;
    case 'L': return D | E | F;
    case 'M': return B | C | E | F | H | J;
    case 'N': return B | C | E | F | H | M;
    case 'O': return A | B | C | D | E | F;
    case 'P': return A | B | E | F | G1 | G2;
    case 'Q': return A | B | C | D | E | F | M;
    case 'R': return A | B | E | F | G1 | G2 | M;
    case 'S': return A | F | G1 | G2 | C | D;
    case 'T': return A | I | L;
    case 'U': return B | C | D | E | F;
    case 'X': return H | J | K | M;
    case 'Y': return H | J | L;
    case 'Z': return A | J | K | D;
    case '-': return G1 | G2;
    case '+': return G1 | G2 | I | L;
    case '/': return J | K;
    case '\\': return H | M;
    case '*': return G1 | G2 | H | I | J | K | L | M;
    case '|': return I | L;
    case '_': return D;
    case '=': return G1 | G2 | D;
    case '[': return A | D | E | F;
    case ']': return A | B | C | D;
    case '\'': return I;
    default: return 0;
  }
}

std::vector<std::vector<Vec2>> strokes_from_mask(unsigned mask) {
  std::vector<std::vector<Vec2>> out;
  for (std::size_t k = 0; k < kSegments.size(); ++k) {
    if (mask & (1u << k)) {
      out.push_back({kSegments[k].a, kSegments[k].b});
    }
  }
  return out;
}

Glyph build_glyph(char c) {
  Glyph g;
  switch (c) {
    case ' ':
      return g;
    case 'V':
      g.strokes = {{{0, 0}, {kMidX, 1}, {kW, 0}}};
      return g;
    case 'W':
      g.strokes = {{{0, 0}, {0.15, 1}, {kMidX, 0.4}, {0.45, 1}, {kW, 0}}};
      return g;
    case '.':
      g.strokes = {{{0.25, 0.9}, {0.35, 0.9}, {0.35, 1}, {0.25, 1}, {0.25, 0.9}}};
      return g;
    case ',':
      g.strokes = {{{0.35, 0.85}, {0.25, 1.05}}};
      return g;
    case ':':
      g.strokes = {{{0.28, 0.25}, {0.32, 0.25}}, {{0.28, 0.75}, {0.32, 0.75}}};
      return g;
    case ';':
      g.strokes = {{{0.28, 0.25}, {0.32, 0.25}}, {{0.35, 0.7}, {0.25, 0.95}}};
      return g;
    case '(':
      g.strokes = {{{0.45, 0}, {0.25, 0.25}, {0.25, 0.75}, {0.45, 1}}};
      return g;
    case ')':
      g.strokes = {{{0.15, 0}, {0.35, 0.25}, {0.35, 0.75}, {0.15, 1}}};
      return g;
    case '<':
      g.strokes = {{{0.5, 0.2}, {0.1, 0.5}, {0.5, 0.8}}};
      return g;
    case '>':
      g.strokes = {{{0.1, 0.2}, {0.5, 0.5}, {0.1, 0.8}}};
      return g;
    case '!':
      g.strokes = {{{0.3, 0}, {0.3, 0.65}}, {{0.3, 0.9}, {0.3, 1}}};
      return g;
    case '?':
      g.strokes = {{{0.05, 0.2}, {0.05, 0.1}, {0.3, 0}, {0.55, 0.1},
                    {0.55, 0.35}, {0.3, 0.5}, {0.3, 0.65}},
                   {{0.3, 0.9}, {0.3, 1}}};
      return g;
    case '%':
      g.strokes = {{{0.6, 0}, {0, 1}},
                   {{0.05, 0}, {0.2, 0}, {0.2, 0.2}, {0.05, 0.2}, {0.05, 0}},
                   {{0.4, 0.8}, {0.55, 0.8}, {0.55, 1}, {0.4, 1}, {0.4, 0.8}}};
      return g;
    default:
      break;
  }
  unsigned mask = mask_for(c);
  if (mask == 0) {
    // Tofu box for anything the face does not cover.
    mask = A | B | C | D | E | F;
  }
  g.strokes = strokes_from_mask(mask);
  return g;
}

}  // namespace

const Glyph& lookup_glyph(char c) {
  // The whole face is built once; lookups after that are read-only, so the
  // table is safe to share across threads.
  static const std::array<Glyph, 128> kFace = [] {
    std::array<Glyph, 128> face;
    for (int i = 0; i < 128; ++i) {
      face[static_cast<std::size_t>(i)] = build_glyph(static_cast<char>(i));
    }
    return face;
  }();
  static const Glyph kTofu = build_glyph('\0');

  unsigned char uc = static_cast<unsigned char>(c);
  if (uc >= 0x80) {
    return kTofu;  // non-ASCII renders as tofu
  }
  return kFace[static_cast<std::size_t>(std::toupper(uc))];
}

}  // namespace mocr::render::detail
