#include "smk/poly.hpp"

#include <charconv>
#include <set>
#include <sstream>

namespace smk {

Fp2Poly embed(const FpPoly& f, u64 d) {
  const u64 p = f.field().modulus();
  std::vector<Fp2Poly::Term> terms;
  terms.reserve(f.num_terms());
  for (const auto& [m, c] : f.terms()) terms.push_back({m, QuadExtElement::embed(c, d)});
  return Fp2Poly::from_terms(std::move(terms), QuadExtElement(0, 0, d, p));
}

std::string to_string(Irreducibility v) {
  switch (v) {
    case Irreducibility::yes:
      return "yes";
    case Irreducibility::no:
      return "no";
    case Irreducibility::unknown:
      return "unknown";
  }
  return "unknown";
}

std::vector<FieldElement> field_elements(const FieldElement& like) {
  const u64 p = like.modulus();
  std::vector<FieldElement> out;
  out.reserve(p);
  for (u64 v = 0; v < p; ++v) out.emplace_back(v, p);
  return out;
}

std::vector<QuadExtElement> field_elements(const QuadExtElement& like) {
  const u64 p = like.modulus();
  if (p > 5000) throw TooLarge("F_{p^2} enumeration limited to p <= 5000");
  std::vector<QuadExtElement> out;
  out.reserve(p * p);
  for (u64 a = 0; a < p; ++a)
    for (u64 b = 0; b < p; ++b) out.emplace_back(a, b, like.d(), p);
  return out;
}

SingularLocus<QuadExtElement> singular_locus_extension(const FpPoly& p) {
  return singular_locus(embed(p, smallest_nonresidue(p.field().modulus())));
}

namespace {

i64 parse_int(std::string_view s, const std::string& whole) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  i64 v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ParseError("bad integer '" + std::string(s) + "' in polynomial '" + whole + "'");
  return v;
}

}  // namespace

FpPoly parse_poly(const std::string& text, u64 p) {
  const FieldElement zero(0, p);
  std::vector<FpPoly::Term> terms;
  std::set<Monomial> seen;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    std::vector<std::string_view> parts;
    std::string_view rest(item);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos;) {
      parts.push_back(rest.substr(0, pos));
      rest.remove_prefix(pos + 1);
    }
    parts.push_back(rest);
    if (parts.size() != 3) throw ParseError("term '" + item + "' is not of the form i,j,c");
    const i64 i = parse_int(parts[0], text);
    const i64 j = parse_int(parts[1], text);
    if (i < 0 || j < 0) throw ParseError("negative exponent in term '" + item + "'");
    const Monomial m{static_cast<u32>(i), static_cast<u32>(j)};
    if (!seen.insert(m).second) throw ParseError("duplicate monomial (" + std::to_string(i) + "," + std::to_string(j) + ")");
    terms.push_back({m, FieldElement::from_int(parse_int(parts[2], text), p)});
  }
  return FpPoly::from_terms(std::move(terms), zero);
}

std::string format_poly(const FpPoly& f) {
  std::string out;
  for (const auto& [m, c] : f.terms()) {
    if (!out.empty()) out += ';';
    out += std::to_string(m.i) + "," + std::to_string(m.j) + "," + std::to_string(c.value());
  }
  return out;
}

}  // namespace smk
