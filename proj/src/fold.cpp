#include <cstdint>
#include <string>
#include <string_view>

#include "quakerules/catalog.hpp"

namespace quakerules {

namespace {

// Decodes one UTF-8 sequence starting at `pos`. Invalid bytes decode as
// themselves with length 1 so that unknown encodings pass through untouched.
std::uint32_t decode_utf8(std::string_view s, std::size_t pos, std::size_t& len) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  auto cont = [&](std::size_t i) -> int {
    if (pos + i >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[pos + i]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    len = 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) {
      len = 2;
      return ((b0 & 0x1Fu) << 6) | static_cast<std::uint32_t>(c1);
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      len = 3;
      return ((b0 & 0x0Fu) << 12) | (static_cast<std::uint32_t>(c1) << 6) | static_cast<std::uint32_t>(c2);
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      len = 4;
      return ((b0 & 0x07u) << 18) | (static_cast<std::uint32_t>(c1) << 12) |
             (static_cast<std::uint32_t>(c2) << 6) | static_cast<std::uint32_t>(c3);
    }
  }
  len = 1;
  return 0xFFFFFFFFu;  // raw byte marker
}

// ASCII replacement for a folded code point, 0 if none applies.
char fold_codepoint(std::uint32_t cp) {
  switch (cp) {
    case 0x0130: case 0x0131: return 'I';  // İ ı
    case 0x011E: case 0x011F: return 'G';  // Ğ ğ
    case 0x015E: case 0x015F: return 'S';  // Ş ş
    case 0x00C7: case 0x00E7: return 'C';  // Ç ç
    case 0x00D1: case 0x00F1: return 'N';
    case 0x00DD: case 0x00FD: case 0x00FF: return 'Y';
    case 0x00D8: case 0x00F8: return 'O';
    case 0x00A0: return ' ';
    default: break;
  }
  if ((cp >= 0x00C0 && cp <= 0x00C5) || (cp >= 0x00E0 && cp <= 0x00E5)) return 'A';
  if ((cp >= 0x00C8 && cp <= 0x00CB) || (cp >= 0x00E8 && cp <= 0x00EB)) return 'E';
  if ((cp >= 0x00CC && cp <= 0x00CF) || (cp >= 0x00EC && cp <= 0x00EF)) return 'I';
  if ((cp >= 0x00D2 && cp <= 0x00D6) || (cp >= 0x00F2 && cp <= 0x00F6)) return 'O';
  if ((cp >= 0x00D9 && cp <= 0x00DC) || (cp >= 0x00F9 && cp <= 0x00FC)) return 'U';
  return 0;
}

bool is_combining_mark(std::uint32_t cp) { return cp >= 0x0300 && cp <= 0x036F; }

}  // namespace

std::string fold_location_key(std::string_view raw) {
  std::string folded;
  folded.reserve(raw.size());
  for (std::size_t pos = 0; pos < raw.size();) {
    std::size_t len = 1;
    const std::uint32_t cp = decode_utf8(raw, pos, len);
    if (cp < 0x80) {
      char c = static_cast<char>(cp);
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      if (c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f') c = ' ';
      folded.push_back(c);
    } else if (is_combining_mark(cp)) {
      // dropped: decomposed diacritics
    } else if (const char a = fold_codepoint(cp); a != 0) {
      folded.push_back(a);
    } else {
      folded.append(raw.substr(pos, len));
    }
    pos += len;
  }

  std::string out;
  out.reserve(folded.size());
  bool pending_space = false;
  for (const char c : folded) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

}  // namespace quakerules
