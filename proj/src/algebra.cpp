#include "relhyp/algebra.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace relhyp {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidTable: return "InvalidTable";
    case ErrorKind::NonSymmetricSystem: return "NonSymmetricSystem";
    case ErrorKind::TrivialFactor: return "TrivialFactor";
    case ErrorKind::RelatorsNotClosed: return "RelatorsNotClosed";
    case ErrorKind::BackendMismatch: return "BackendMismatch";
    case ErrorKind::ConeVertexInPlainGraph: return "ConeVertexInPlainGraph";
    case ErrorKind::ExplorationBudgetExceeded: return "ExplorationBudgetExceeded";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotWithinCap: return "NotWithinCap";
    case ErrorKind::CosetKeyUnknown: return "CosetKeyUnknown";
    case ErrorKind::DanglingConeEdge: return "DanglingConeEdge";
    case ErrorKind::ZeroBiedge: return "ZeroBiedge";
    case ErrorKind::SameCoset: return "SameCoset";
    case ErrorKind::YNotReduced: return "YNotReduced";
    case ErrorKind::GeodesicEnumerationTruncated: return "GeodesicEnumerationTruncated";
    case ErrorKind::EnumerationTruncated: return "EnumerationTruncated";
    case ErrorKind::ReplacementNotFound: return "ReplacementNotFound";
    case ErrorKind::AreaCapExceeded: return "AreaCapExceeded";
    case ErrorKind::NotTrivialWithinBudget: return "NotTrivialWithinBudget";
    case ErrorKind::GenerationFailure: return "GenerationFailure";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Error";
}

bool letter_equal(const Letter& a, const Letter& b) { return a == b; }

std::size_t NormalForm::rel_length() const {
  std::size_t n = 0;
  for (const auto& s : syllables) {
    if (const auto* f = std::get_if<FreeSyllable>(&s))
      n += f->letters.size();
    else
      n += 1;
  }
  return n;
}

std::size_t NormalFormHash::operator()(const NormalForm& nf) const {
  std::size_t h = 1469598103934665603ull;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const auto& s : nf.syllables) {
    if (const auto* f = std::get_if<FreeSyllable>(&s)) {
      mix(0x11);
      for (int32_t l : f->letters) mix(static_cast<std::size_t>(static_cast<int64_t>(l)) * 2654435761u);
    } else {
      const auto& fs = std::get<FactorSyllable>(s);
      mix(0x22);
      mix(static_cast<std::size_t>(fs.factor));
      mix(static_cast<std::size_t>(fs.elem));
      if (fs.exp != 0) mix(big_hash(fs.exp));
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// GroupSpec lookups

int32_t GroupSpec::factor_index(const std::string& id) const {
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (factors[i].id == id) return static_cast<int32_t>(i);
  return -1;
}

int32_t GroupSpec::symbol_index(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].name == name) return static_cast<int32_t>(i) + 1;
    if (generators[i].inverse == name) return -(static_cast<int32_t>(i) + 1);
  }
  return 0;
}

int32_t GroupSpec::finite_element(int32_t f, const std::string& name) const {
  const auto& fac = factors[static_cast<std::size_t>(f)];
  for (std::size_t i = 0; i < fac.element_names.size(); ++i)
    if (fac.element_names[i] == name) return static_cast<int32_t>(i);
  return -1;
}

// ---------------------------------------------------------------------------
// Normal-form arithmetic

NormalForm nf_identity() { return NormalForm{}; }

namespace {

bool syllable_trivial(const Syllable& s) {
  if (const auto* f = std::get_if<FreeSyllable>(&s)) return f->letters.empty();
  const auto& fs = std::get<FactorSyllable>(s);
  return fs.elem == 0 && fs.exp == 0;
}

void append_syllable(const GroupSpec& spec, std::vector<Syllable>& out, Syllable s) {
  if (syllable_trivial(s)) return;
  if (out.empty()) {
    out.push_back(std::move(s));
    return;
  }
  if (auto* sf = std::get_if<FreeSyllable>(&s)) {
    if (auto* bf = std::get_if<FreeSyllable>(&out.back())) {
      std::size_t i = 0;
      while (!bf->letters.empty() && i < sf->letters.size() &&
             bf->letters.back() == -sf->letters[i]) {
        bf->letters.pop_back();
        ++i;
      }
      if (bf->letters.empty()) {
        out.pop_back();
        FreeSyllable rest;
        rest.letters.assign(sf->letters.begin() + static_cast<long>(i), sf->letters.end());
        append_syllable(spec, out, Syllable{std::move(rest)});
      } else {
        bf->letters.insert(bf->letters.end(), sf->letters.begin() + static_cast<long>(i),
                           sf->letters.end());
      }
      return;
    }
    out.push_back(std::move(s));
    return;
  }
  const auto& fs = std::get<FactorSyllable>(s);
  if (auto* bfs = std::get_if<FactorSyllable>(&out.back()); bfs && bfs->factor == fs.factor) {
    const auto& fac = spec.factor(fs.factor);
    if (fac.kind == FactorKind::FiniteTable) {
      int prod = fac.mul(bfs->elem, fs.elem);
      if (prod == 0)
        out.pop_back();
      else
        bfs->elem = prod;
    } else {
      BigInt sum = bfs->exp + fs.exp;
      if (sum == 0)
        out.pop_back();
      else
        bfs->exp = std::move(sum);
    }
    return;
  }
  out.push_back(std::move(s));
}

}  // namespace

NormalForm nf_multiply(const GroupSpec& spec, const NormalForm& a, const NormalForm& b) {
  NormalForm out = a;
  for (const auto& s : b.syllables) append_syllable(spec, out.syllables, s);
  return out;
}

NormalForm nf_invert(const GroupSpec& spec, const NormalForm& a) {
  NormalForm out;
  out.syllables.reserve(a.syllables.size());
  for (auto it = a.syllables.rbegin(); it != a.syllables.rend(); ++it) {
    if (const auto* f = std::get_if<FreeSyllable>(&*it)) {
      FreeSyllable inv;
      inv.letters.reserve(f->letters.size());
      for (auto lit = f->letters.rbegin(); lit != f->letters.rend(); ++lit)
        inv.letters.push_back(-*lit);
      out.syllables.emplace_back(std::move(inv));
    } else {
      const auto& fs = std::get<FactorSyllable>(*it);
      FactorSyllable inv;
      inv.factor = fs.factor;
      if (spec.factor(fs.factor).kind == FactorKind::FiniteTable)
        inv.elem = spec.factor(fs.factor).inv(fs.elem);
      else
        inv.exp = -fs.exp;
      out.syllables.emplace_back(std::move(inv));
    }
  }
  return out;
}

NormalForm nf_power(const GroupSpec& spec, const NormalForm& a, const BigInt& k) {
  if (k == 0) return nf_identity();
  NormalForm base = k < 0 ? nf_invert(spec, a) : a;
  BigInt n = big_abs(k);
  NormalForm acc = nf_identity();
  NormalForm sq = base;
  while (n > 0) {
    if ((n & 1) != 0) acc = nf_multiply(spec, acc, sq);
    n >>= 1;
    if (n > 0) sq = nf_multiply(spec, sq, sq);
  }
  return acc;
}

NormalForm GroupSpec::symbol_value(int32_t signed_sym) const {
  std::size_t idx = static_cast<std::size_t>(std::abs(signed_sym)) - 1;
  if (values[idx].has_value()) {
    if (signed_sym > 0) return *values[idx];
    NormalForm inv;
    // invert without spec recursion: handled by caller helpers; here we need spec
    // methods, so fall through below.
    return inv;  // unreachable; see nf_of_letter
  }
  NormalForm nf;
  FreeSyllable fs;
  int32_t fi = free_index[idx];
  fs.letters.push_back(signed_sym > 0 ? fi : -fi);
  nf.syllables.emplace_back(std::move(fs));
  return nf;
}

NormalForm nf_of_letter(const GroupSpec& spec, const Letter& l) {
  if (const auto* x = std::get_if<XLetter>(&l)) {
    std::size_t idx = static_cast<std::size_t>(std::abs(x->sym)) - 1;
    if (spec.values[idx].has_value()) {
      if (x->sym > 0) return *spec.values[idx];
      return nf_invert(spec, *spec.values[idx]);
    }
    NormalForm nf;
    FreeSyllable fs;
    int32_t fi = spec.free_index[idx];
    fs.letters.push_back(x->sym > 0 ? fi : -fi);
    nf.syllables.emplace_back(std::move(fs));
    return nf;
  }
  const auto& h = std::get<HLetter>(l);
  NormalForm nf;
  FactorSyllable fs;
  fs.factor = h.factor;
  if (spec.factor(h.factor).kind == FactorKind::FiniteTable) {
    if (h.elem == 0) return nf;  // identity letter degenerates to the empty form
    fs.elem = h.elem;
  } else {
    if (h.exp == 0) return nf;
    fs.exp = h.exp;
  }
  nf.syllables.emplace_back(std::move(fs));
  return nf;
}

NormalForm evaluate(const GroupSpec& spec, const Word& w) {
  NormalForm out;
  for (const auto& l : w.letters) {
    NormalForm v = nf_of_letter(spec, l);
    for (auto& s : v.syllables) append_syllable(spec, out.syllables, s);
  }
  return out;
}

NormalForm reduce(const GroupSpec& spec, const Word& w) {
  if (!spec.is_free_product())
    throw Error(ErrorKind::BackendMismatch, "reduce requires the free-product backend");
  return evaluate(spec, w);
}

Letter invert_letter(const GroupSpec& spec, const Letter& l) {
  if (const auto* x = std::get_if<XLetter>(&l)) return XLetter{-x->sym};
  const auto& h = std::get<HLetter>(l);
  HLetter out;
  out.factor = h.factor;
  if (spec.factor(h.factor).kind == FactorKind::FiniteTable)
    out.elem = spec.factor(h.factor).inv(h.elem);
  else
    out.exp = -h.exp;
  return out;
}

Word invert_word(const GroupSpec& spec, const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    out.letters.push_back(invert_letter(spec, *it));
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string serialize_letter(const GroupSpec& spec, const Letter& l) {
  if (const auto* x = std::get_if<XLetter>(&l)) {
    const auto& g = spec.generators[static_cast<std::size_t>(std::abs(x->sym)) - 1];
    return x->sym > 0 ? g.name : g.inverse;
  }
  const auto& h = std::get<HLetter>(l);
  const auto& fac = spec.factor(h.factor);
  if (fac.kind == FactorKind::FiniteTable)
    return fac.id + ":" + fac.element_names[static_cast<std::size_t>(h.elem)];
  return fac.id + ":" + h.exp.str();
}

std::string serialize_word(const GroupSpec& spec, const Word& w) {
  if (w.letters.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.letters.size(); ++i) {
    if (i) out += '.';
    out += serialize_letter(spec, w.letters[i]);
  }
  return out;
}

std::string serialize(const GroupSpec& spec, const NormalForm& nf) {
  if (nf.is_identity()) return "1";
  std::string out;
  bool first = true;
  auto emit = [&](const std::string& seg) {
    if (!first) out += '.';
    out += seg;
    first = false;
  };
  for (const auto& s : nf.syllables) {
    if (const auto* f = std::get_if<FreeSyllable>(&s)) {
      for (int32_t l : f->letters) {
        // free index back to symbol
        for (std::size_t i = 0; i < spec.generators.size(); ++i) {
          if (spec.free_index[i] == std::abs(l)) {
            emit(l > 0 ? spec.generators[i].name : spec.generators[i].inverse);
            break;
          }
        }
      }
    } else {
      const auto& fs = std::get<FactorSyllable>(s);
      const auto& fac = spec.factor(fs.factor);
      if (fac.kind == FactorKind::FiniteTable)
        emit(fac.id + ":" + fac.element_names[static_cast<std::size_t>(fs.elem)]);
      else
        emit(fac.id + ":" + fs.exp.str());
    }
  }
  return out;
}

bool canonical_less(const GroupSpec& spec, const NormalForm& a, const NormalForm& b) {
  std::string sa = serialize(spec, a), sb = serialize(spec, b);
  if (sa.size() != sb.size()) return sa.size() < sb.size();
  return sa < sb;
}

// ---------------------------------------------------------------------------
// Word parsing

namespace {

Letter parse_letter_token(const GroupSpec& spec, const std::string& tok) {
  auto colon = tok.find(':');
  if (colon != std::string::npos) {
    std::string fid = tok.substr(0, colon);
    std::string elem = tok.substr(colon + 1);
    int32_t f = spec.factor_index(fid);
    if (f < 0) throw Error(ErrorKind::ParseError, "unknown factor '" + fid + "'");
    const auto& fac = spec.factor(f);
    if (fac.kind == FactorKind::FiniteTable) {
      int32_t e = spec.finite_element(f, elem);
      if (e < 0) throw Error(ErrorKind::ParseError, "unknown element '" + tok + "'");
      if (e == 0) throw Error(ErrorKind::ParseError, "identity is not a letter: '" + tok + "'");
      HLetter h;
      h.factor = f;
      h.elem = e;
      return h;
    }
    BigInt exp;
    try {
      exp = BigInt(elem);
    } catch (...) {
      throw Error(ErrorKind::ParseError, "bad exponent in '" + tok + "'");
    }
    if (exp == 0) throw Error(ErrorKind::ParseError, "identity is not a letter: '" + tok + "'");
    HLetter h;
    h.factor = f;
    h.exp = exp;
    return h;
  }
  if (int32_t s = spec.symbol_index(tok); s != 0) return XLetter{s};
  // bare finite-factor element name
  for (int32_t f = 0; f < spec.factor_count(); ++f) {
    if (spec.factor(f).kind != FactorKind::FiniteTable) continue;
    int32_t e = spec.finite_element(f, tok);
    if (e > 0) {
      HLetter h;
      h.factor = f;
      h.elem = e;
      return h;
    }
  }
  throw Error(ErrorKind::ParseError, "unknown letter '" + tok + "'");
}

std::vector<std::string> split_dots(const std::string& text) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : text) {
    if (c == '.') {
      toks.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  toks.push_back(cur);
  return toks;
}

}  // namespace

Word parse_word(const GroupSpec& spec, const std::string& text) {
  Word w;
  if (text.empty() || text == "1") return w;
  for (const auto& tok : split_dots(text)) {
    if (tok.empty() || tok == "1") continue;
    w.letters.push_back(parse_letter_token(spec, tok));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Abelianization

std::vector<BigInt> GroupSpec::abelianize(const NormalForm& nf) const {
  std::vector<BigInt> v(static_cast<std::size_t>(ab_rank), BigInt(0));
  int zslot = generator_count();
  std::vector<int> zindex(factors.size(), -1);
  {
    int z = 0;
    for (std::size_t i = 0; i < factors.size(); ++i)
      if (factors[i].kind == FactorKind::InfiniteCyclic) zindex[i] = zslot + z++;
  }
  for (const auto& s : nf.syllables) {
    if (const auto* f = std::get_if<FreeSyllable>(&s)) {
      for (int32_t l : f->letters) {
        // free index -> generator pair
        for (std::size_t i = 0; i < generators.size(); ++i) {
          if (free_index[i] == std::abs(l)) {
            v[i] += (l > 0 ? 1 : -1);
            break;
          }
        }
      }
    } else {
      const auto& fs = std::get<FactorSyllable>(s);
      if (factors[static_cast<std::size_t>(fs.factor)].kind == FactorKind::InfiniteCyclic)
        v[static_cast<std::size_t>(zindex[static_cast<std::size_t>(fs.factor)])] += fs.exp;
    }
  }
  return v;
}

namespace detail {

// Row echelon form over Z (pivot columns strictly increasing, pivots > 0).
std::vector<std::vector<BigInt>> integer_echelon(std::vector<std::vector<BigInt>> rows,
                                                 std::size_t pivot_cols) {
  std::vector<std::vector<BigInt>> out;
  std::size_t r = 0;
  for (std::size_t col = 0; col < pivot_cols && r <= rows.size(); ++col) {
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        if (best == rows.size() || big_abs(rows[i][col]) < big_abs(rows[best][col])) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[r], rows[best]);
      bool others = false;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        if (rows[i][col] == 0) continue;
        BigInt q = rows[i][col] / rows[r][col];
        for (std::size_t c = 0; c < rows[i].size(); ++c) rows[i][c] -= q * rows[r][c];
        if (rows[i][col] != 0) others = true;
      }
      if (!others) {
        if (rows[r][col] < 0)
          for (auto& x : rows[r]) x = -x;
        out.push_back(rows[r]);
        ++r;
        break;
      }
    }
  }
  return out;
}

bool echelon_reduce(const std::vector<std::vector<BigInt>>& echelon, std::vector<BigInt>& v,
                    std::size_t pivot_cols) {
  for (const auto& row : echelon) {
    std::size_t col = 0;
    while (col < pivot_cols && row[col] == 0) ++col;
    if (col == pivot_cols) continue;
    if (v[col] == 0) continue;
    if (v[col] % row[col] != 0) return false;
    BigInt q = v[col] / row[col];
    for (std::size_t c = 0; c < v.size(); ++c) v[c] -= q * row[c];
  }
  for (std::size_t c = 0; c < pivot_cols; ++c)
    if (v[c] != 0) return false;
  return true;
}

}  // namespace detail

bool GroupSpec::ab_lattice_member(const std::vector<BigInt>& v0) const {
  std::vector<BigInt> v = v0;
  return detail::echelon_reduce(ab_lattice, v, v.size());
}

// ---------------------------------------------------------------------------
// Validation

namespace {

Word respell(const GroupSpec& spec, const NormalForm& nf) {
  Word w;
  for (const auto& s : nf.syllables) {
    if (const auto* f = std::get_if<FreeSyllable>(&s)) {
      for (int32_t l : f->letters) {
        for (std::size_t i = 0; i < spec.generators.size(); ++i) {
          if (spec.free_index[i] == std::abs(l)) {
            w.letters.push_back(XLetter{l > 0 ? static_cast<int32_t>(i) + 1
                                              : -(static_cast<int32_t>(i) + 1)});
            break;
          }
        }
      }
    } else {
      const auto& fs = std::get<FactorSyllable>(s);
      HLetter h;
      h.factor = fs.factor;
      h.elem = fs.elem;
      h.exp = fs.exp;
      w.letters.push_back(h);
    }
  }
  return w;
}

void validate_table(const PeripheralFactor& f) {
  int n = f.order();
  if (n < 2) throw Error(ErrorKind::TrivialFactor, "factor '" + f.id + "' has order < 2");
  if (static_cast<int>(f.table.size()) != n)
    throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': table is not square");
  for (const auto& row : f.table) {
    if (static_cast<int>(row.size()) != n)
      throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': table is not square");
    for (int x : row)
      if (x < 0 || x >= n)
        throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': entry out of range");
  }
  for (int i = 0; i < n; ++i) {
    if (f.table[0][i] != i || f.table[i][0] != i)
      throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': element 0 is not an identity");
  }
  if (static_cast<int>(f.inverse.size()) != n)
    throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': bad inverse map");
  for (int i = 0; i < n; ++i) {
    if (f.inverse[i] < 0 || f.inverse[i] >= n || f.table[i][f.inverse[i]] != 0 ||
        f.table[f.inverse[i]][i] != 0)
      throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': bad inverse for element " +
                                               f.element_names[static_cast<std::size_t>(i)]);
    if (f.inverse[static_cast<std::size_t>(f.inverse[i])] != i)
      throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': inverse is not an involution");
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (f.table[f.table[a][b]][c] != f.table[a][f.table[b][c]])
          throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': associativity fails at (" +
                                                   std::to_string(a) + "," + std::to_string(b) +
                                                   "," + std::to_string(c) + ")");
}

}  // namespace

GroupSpec validate_spec(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad spec JSON: ") + e.what());
  }

  GroupSpec spec;
  std::string backend = j.value("backend", "free_product");
  if (backend == "free_product")
    spec.backend = Backend::FreeProduct;
  else if (backend == "presented")
    spec.backend = Backend::Presented;
  else
    throw Error(ErrorKind::ParseError, "unknown backend '" + backend + "'");

  std::unordered_set<std::string> names;
  names.insert("1");

  if (j.contains("factors")) {
    for (const auto& jf : j["factors"]) {
      PeripheralFactor f;
      f.id = jf.at("id").get<std::string>();
      if (f.id.empty() || !names.insert(f.id).second)
        throw Error(ErrorKind::ParseError, "duplicate or empty factor id '" + f.id + "'");
      std::string kind = jf.value("kind", "table");
      if (kind == "Z" || kind == "z") {
        f.kind = FactorKind::InfiniteCyclic;
      } else if (kind == "table") {
        f.kind = FactorKind::FiniteTable;
        f.element_names = jf.at("elements").get<std::vector<std::string>>();
        if (f.element_names.empty() || f.element_names[0] != "1")
          throw Error(ErrorKind::InvalidTable,
                      "factor '" + f.id + "': element list must start with identity '1'");
        for (std::size_t i = 1; i < f.element_names.size(); ++i)
          if (!names.insert(f.element_names[i]).second)
            throw Error(ErrorKind::ParseError,
                        "name collision on '" + f.element_names[i] + "'");
        int n = f.order();
        f.table.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), -1));
        const auto& jt = jf.at("table");
        if (static_cast<int>(jt.size()) != n)
          throw Error(ErrorKind::InvalidTable, "factor '" + f.id + "': table is not square");
        for (int a = 0; a < n; ++a) {
          for (int b = 0; b < n; ++b) {
            std::string cell = jt[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]
                                   .get<std::string>();
            int e = -1;
            for (int k = 0; k < n; ++k)
              if (f.element_names[static_cast<std::size_t>(k)] == cell) e = k;
            if (e < 0)
              throw Error(ErrorKind::InvalidTable,
                          "factor '" + f.id + "': unknown table entry '" + cell + "'");
            f.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = e;
          }
        }
        f.inverse.assign(static_cast<std::size_t>(n), -1);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            if (f.table[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] == 0)
              f.inverse[static_cast<std::size_t>(a)] = b;
        validate_table(f);
      } else {
        throw Error(ErrorKind::ParseError, "unknown factor kind '" + kind + "'");
      }
      spec.factors.push_back(std::move(f));
    }
  }

  if (j.contains("generators")) {
    for (const auto& jg : j["generators"]) {
      GeneratorSymbol g;
      g.name = jg.at("name").get<std::string>();
      g.inverse = jg.value("inverse", g.name);
      if (g.name.empty() || !names.insert(g.name).second)
        throw Error(ErrorKind::NonSymmetricSystem, "duplicate or empty generator '" + g.name + "'");
      if (g.inverse != g.name && !names.insert(g.inverse).second)
        throw Error(ErrorKind::NonSymmetricSystem, "duplicate inverse name '" + g.inverse + "'");
      spec.generators.push_back(g);
    }
  }

  // Free indices: Presented symbols are all abstract; FreeProduct symbols are
  // free unless they carry a value.
  spec.values.assign(spec.generators.size(), std::nullopt);
  spec.free_index.assign(spec.generators.size(), 0);
  std::vector<std::string> value_texts(spec.generators.size());
  if (j.contains("generators")) {
    std::size_t i = 0;
    for (const auto& jg : j["generators"]) value_texts[i++] = jg.value("value", "");
  }
  int32_t next_free = 1;
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    bool has_value = spec.is_free_product() && !value_texts[i].empty();
    if (!has_value) spec.free_index[i] = next_free++;
  }
  spec.free_symbol_count = next_free - 1;
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    if (spec.is_free_product() && !value_texts[i].empty()) {
      Word w = parse_word(spec, value_texts[i]);
      for (const auto& l : w.letters)
        if (const auto* x = std::get_if<XLetter>(&l))
          if (spec.values[static_cast<std::size_t>(std::abs(x->sym)) - 1].has_value() ||
              spec.free_index[static_cast<std::size_t>(std::abs(x->sym)) - 1] == 0)
            throw Error(ErrorKind::ParseError,
                        "generator values may reference free symbols and factor letters only");
      spec.values[i] = evaluate(spec, w);
    }
  }

  if (!spec.is_free_product()) {
    for (auto& f : spec.factors) {
      if (f.kind == FactorKind::InfiniteCyclic) {
        std::string emb;
        if (j.contains("factors"))
          for (const auto& jf : j["factors"])
            if (jf.at("id").get<std::string>() == f.id) emb = jf.value("embedding", "");
        if (emb.empty())
          throw Error(ErrorKind::ParseError,
                      "presented backend requires an embedding word for Z factor '" + f.id + "'");
        Word w = parse_word(spec, emb);
        std::vector<int32_t> letters;
        for (const auto& l : w.letters) {
          const auto* x = std::get_if<XLetter>(&l);
          if (!x)
            throw Error(ErrorKind::ParseError,
                        "embedding words must use X letters only ('" + f.id + "')");
          letters.push_back(x->sym);
        }
        f.embeddings.push_back(std::move(letters));
      } else if (j.contains("factors")) {
        for (const auto& jf : j["factors"]) {
          if (jf.at("id").get<std::string>() != f.id || !jf.contains("embeddings")) continue;
          auto embs = jf["embeddings"].get<std::vector<std::string>>();
          if (static_cast<int>(embs.size()) != f.order() - 1)
            throw Error(ErrorKind::ParseError,
                        "finite factor '" + f.id + "' needs one embedding per non-identity element");
          for (const auto& text : embs) {
            Word w = parse_word(spec, text);
            std::vector<int32_t> letters;
            for (const auto& l : w.letters) {
              const auto* x = std::get_if<XLetter>(&l);
              if (!x)
                throw Error(ErrorKind::ParseError, "embedding words must use X letters only");
              letters.push_back(x->sym);
            }
            f.embeddings.push_back(std::move(letters));
          }
        }
      }
    }
  }

  // Relators
  std::vector<Word> raw;
  if (j.contains("relators"))
    for (const auto& jr : j["relators"]) raw.push_back(parse_word(spec, jr.get<std::string>()));
  if (spec.is_free_product() && !raw.empty())
    throw Error(ErrorKind::BackendMismatch, "free-product backend carries no relators");

  if (!spec.is_free_product()) {
    // Embedding relators tie each declared factor to its image in the group.
    for (int32_t fi = 0; fi < spec.factor_count(); ++fi) {
      const auto& f = spec.factor(fi);
      if (f.embeddings.empty()) continue;
      if (f.kind == FactorKind::InfiniteCyclic) {
        Word w;
        HLetter h;
        h.factor = fi;
        h.exp = -1;
        w.letters.push_back(h);
        for (int32_t s : f.embeddings[0]) w.letters.push_back(XLetter{s});
        raw.push_back(std::move(w));
      } else {
        for (int e = 1; e < f.order(); ++e) {
          Word w;
          HLetter h;
          h.factor = fi;
          h.elem = f.inv(e);
          w.letters.push_back(h);
          for (int32_t s : f.embeddings[static_cast<std::size_t>(e) - 1])
            w.letters.push_back(XLetter{s});
          raw.push_back(std::move(w));
        }
      }
      spec.embedding_relators_added = true;
    }
  }

  // Close under inversion and cyclic shifts of the reduced respellings.
  std::vector<Word> closed;
  std::unordered_set<std::string> seen;
  std::vector<Word> queue = raw;
  std::size_t original = 0;
  for (const auto& w : raw) {
    NormalForm nf = evaluate(spec, w);
    if (!nf.is_identity()) ++original;
  }
  while (!queue.empty()) {
    Word w = std::move(queue.back());
    queue.pop_back();
    Word r = respell(spec, evaluate(spec, w));
    if (r.letters.empty()) continue;
    std::string key = serialize_word(spec, r);
    if (!seen.insert(key).second) continue;
    closed.push_back(r);
    Word inv = invert_word(spec, r);
    queue.push_back(inv);
    for (std::size_t s = 1; s < r.letters.size(); ++s) {
      Word shift;
      shift.letters.insert(shift.letters.end(), r.letters.begin() + static_cast<long>(s),
                           r.letters.end());
      shift.letters.insert(shift.letters.end(), r.letters.begin(),
                           r.letters.begin() + static_cast<long>(s));
      queue.push_back(std::move(shift));
    }
  }
  std::sort(closed.begin(), closed.end(), [&spec](const Word& a, const Word& b) {
    return serialize_word(spec, a) < serialize_word(spec, b);
  });
  spec.relators_autoclosed = closed.size() > original;
  spec.relators = std::move(closed);

  // Omega: H letters occurring in the closed relator set.
  {
    std::unordered_set<std::string> omega_seen;
    for (const auto& r : spec.relators) {
      for (const auto& l : r.letters) {
        if (const auto* h = std::get_if<HLetter>(&l)) {
          std::string key = serialize_letter(spec, l);
          if (omega_seen.insert(key).second) spec.omega.push_back(*h);
        }
      }
    }
    std::sort(spec.omega.begin(), spec.omega.end(), [&spec](const HLetter& a, const HLetter& b) {
      return serialize_letter(spec, Letter{a}) < serialize_letter(spec, Letter{b});
    });
  }

  // Abelianization lattice (Presented only).
  if (!spec.is_free_product()) {
    int zcount = 0;
    for (const auto& f : spec.factors)
      if (f.kind == FactorKind::InfiniteCyclic) ++zcount;
    spec.ab_rank = spec.generator_count() + zcount;
    std::vector<std::vector<BigInt>> rows;
    for (const auto& r : spec.relators) rows.push_back(spec.abelianize(evaluate(spec, r)));
    spec.ab_lattice =
        detail::integer_echelon(std::move(rows), static_cast<std::size_t>(spec.ab_rank));
  }

  return spec;
}

GroupSpec load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return validate_spec(ss.str());
}

// ---------------------------------------------------------------------------
// Certificates and tri-valued equality

bool certificate_valid(const GroupSpec& spec, const NormalForm& w,
                       const TrivialityCertificate& cert) {
  NormalForm prod = nf_identity();
  for (const auto& step : cert.steps) {
    NormalForm conj = nf_multiply(
        spec, nf_multiply(spec, nf_invert(spec, step.conjugator), evaluate(spec, step.relator)),
        step.conjugator);
    prod = nf_multiply(spec, prod, conj);
  }
  return prod == w;
}

EqualResult equal(const GroupSpec& spec, const NormalForm& a, const NormalForm& b,
                  const EqualBudget& budget) {
  EqualResult res;
  NormalForm w = nf_multiply(spec, a, nf_invert(spec, b));
  if (w.is_identity()) {
    res.verdict = Tri::Yes;
    res.certificate = TrivialityCertificate{};
    return res;
  }
  if (spec.is_free_product()) {
    res.verdict = Tri::No;
    return res;
  }
  if (!spec.ab_lattice_member(spec.abelianize(w))) {
    res.verdict = Tri::No;
    return res;
  }
  if (auto cert = find_triviality_certificate(spec, w, budget)) {
    res.verdict = Tri::Yes;
    res.certificate = std::move(cert);
    return res;
  }
  res.verdict = Tri::Unknown;
  return res;
}

}  // namespace relhyp
