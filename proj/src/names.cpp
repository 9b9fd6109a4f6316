#include "semnav/names.hpp"

#include <stdexcept>

namespace semnav {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

}  // namespace

std::optional<std::string> try_canonicalize(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  if (text.empty()) return std::nullopt;

  std::string out;
  out.reserve(text.size());
  bool in_space = false;
  for (char c : text) {
    if (is_space(c)) {
      if (!in_space) out.push_back('_');
      in_space = true;
      continue;
    }
    in_space = false;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return std::nullopt;
    out.push_back(c);
  }
  return out;
}

std::string canonicalize(std::string_view text) {
  auto c = try_canonicalize(text);
  if (!c) throw std::invalid_argument("invalid entity name: '" + std::string(text) + "'");
  return *c;
}

EntityName::EntityName(std::string_view text)
    : canonical_(canonicalize(text)), display_(text) {
  while (!display_.empty() && is_space(display_.front())) display_.erase(0, 1);
  while (!display_.empty() && is_space(display_.back())) display_.pop_back();
}

}  // namespace semnav
