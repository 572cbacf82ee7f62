#include "isolab/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <cstring>
#include <unordered_set>

namespace isolab {

std::optional<unsigned long long> GroupSpec::order() const {
  unsigned long long n = 1;
  for (const auto& a : atoms) {
    if (a.kind != AtomKind::FiniteCyclic) return std::nullopt;
    for (int i = 0; i < a.rank; ++i) {
      if (n > 1'000'000'000'000ull / static_cast<unsigned long long>(a.modulus))
        return std::nullopt;  // order exists but is out of tracked range
      n *= static_cast<unsigned long long>(a.modulus);
    }
  }
  return n;
}

namespace {

struct SpecParser {
  const std::string& s;
  std::size_t pos = 0;

  explicit SpecParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) const { throw GroupParseError(msg, pos); }

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  long long integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected an integer");
    return std::stoll(s.substr(start, pos - start));
  }

  void parse_unit(std::vector<Atom>& out) {
    skip_ws();
    if (eat('(')) {
      parse_product(out);
      if (!eat(')')) fail("expected ')'");
      return;
    }
    if (pos >= s.size()) fail("expected a group atom");
    char c = s[pos];
    if (c == 'F') {
      ++pos;
      long long k = integer();
      if (k < 1) fail("free rank must be >= 1");
      out.push_back({AtomKind::Free, static_cast<int>(k), 0});
      return;
    }
    if (c == 'Z') {
      ++pos;
      if (s.compare(pos, 3, "mod") == 0) {
        pos += 3;
        long long m = integer();
        if (m < 2) fail("modulus must be >= 2");
        long long d = 1;
        if (eat('^')) {
          d = integer();
          if (d < 1) fail("power must be >= 1");
        }
        out.push_back({AtomKind::FiniteCyclic, static_cast<int>(d), m});
        return;
      }
      long long d = 1;
      if (eat('^')) {
        d = integer();
        if (d < 1) fail("power must be >= 1");
      }
      out.push_back({AtomKind::FreeAbelian, static_cast<int>(d), 0});
      return;
    }
    fail("expected 'F', 'Z', 'Zmod' or '('");
  }

  void parse_product(std::vector<Atom>& out) {
    parse_unit(out);
    skip_ws();
    while (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X')) {
      ++pos;
      parse_unit(out);
      skip_ws();
    }
  }
};

std::string default_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "g" + std::to_string(i);
}

// (atom index, local generator index) of a flat generator index.
std::pair<int, int> locate(const GroupSpec& spec, int gen) {
  int offset = 0;
  for (std::size_t a = 0; a < spec.atoms.size(); ++a) {
    if (gen < offset + spec.atoms[a].rank) return {static_cast<int>(a), gen - offset};
    offset += spec.atoms[a].rank;
  }
  throw std::invalid_argument("generator index out of range");
}

long long mod_norm(long long v, long long m) {
  long long r = v % m;
  return r < 0 ? r + m : r;
}

}  // namespace

GroupSpec parse_group_spec(const std::string& text) {
  SpecParser p(text);
  GroupSpec spec;
  p.parse_product(spec.atoms);
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  spec.text = text;
  int r = spec.total_rank();
  spec.generator_names.reserve(r);
  for (int i = 0; i < r; ++i) spec.generator_names.push_back(default_name(i));
  return spec;
}

Element identity_element(const GroupSpec& spec) {
  Element e;
  e.comps.resize(spec.atoms.size());
  for (std::size_t a = 0; a < spec.atoms.size(); ++a) {
    if (spec.atoms[a].kind != AtomKind::Free)
      e.comps[a].exps.assign(spec.atoms[a].rank, 0);
  }
  return e;
}

bool is_identity(const Element& e) {
  for (const auto& c : e.comps) {
    if (!c.word.empty()) return false;
    for (long long x : c.exps)
      if (x != 0) return false;
  }
  return true;
}

Element generator_element(const GroupSpec& spec, int gen_index, bool inv) {
  auto [a, local] = locate(spec, gen_index);
  Element e = identity_element(spec);
  const Atom& atom = spec.atoms[a];
  switch (atom.kind) {
    case AtomKind::Free:
      e.comps[a].word.push_back(inv ? -(local + 1) : (local + 1));
      break;
    case AtomKind::FreeAbelian:
      e.comps[a].exps[local] = inv ? -1 : 1;
      break;
    case AtomKind::FiniteCyclic:
      e.comps[a].exps[local] = inv ? atom.modulus - 1 : 1;
      break;
  }
  return e;
}

Element multiply(const Element& g, const Element& h, const GroupSpec& spec) {
  Element out;
  out.comps.resize(spec.atoms.size());
  for (std::size_t a = 0; a < spec.atoms.size(); ++a) {
    const Atom& atom = spec.atoms[a];
    const AtomElement& x = g.comps[a];
    const AtomElement& y = h.comps[a];
    AtomElement& z = out.comps[a];
    if (atom.kind == AtomKind::Free) {
      z.word = x.word;
      for (std::int32_t letter : y.word) {
        if (!z.word.empty() && z.word.back() == -letter)
          z.word.pop_back();
        else
          z.word.push_back(letter);
      }
    } else {
      z.exps.resize(atom.rank);
      for (int i = 0; i < atom.rank; ++i) {
        long long v = x.exps[i] + y.exps[i];
        z.exps[i] = atom.kind == AtomKind::FiniteCyclic ? mod_norm(v, atom.modulus) : v;
      }
    }
  }
  return out;
}

Element inverse(const Element& g, const GroupSpec& spec) {
  Element out;
  out.comps.resize(spec.atoms.size());
  for (std::size_t a = 0; a < spec.atoms.size(); ++a) {
    const Atom& atom = spec.atoms[a];
    const AtomElement& x = g.comps[a];
    AtomElement& z = out.comps[a];
    if (atom.kind == AtomKind::Free) {
      z.word.reserve(x.word.size());
      for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) z.word.push_back(-*it);
    } else {
      z.exps.resize(atom.rank);
      for (int i = 0; i < atom.rank; ++i)
        z.exps[i] = atom.kind == AtomKind::FiniteCyclic ? mod_norm(-x.exps[i], atom.modulus)
                                                        : -x.exps[i];
    }
  }
  return out;
}

Element parse_word(const GroupSpec& spec, const std::string& word) {
  Element e = identity_element(spec);
  if (word == "e" || word == "1" || word.empty()) return e;
  for (std::size_t i = 0; i < word.size(); ++i) {
    char c = word[i];
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    bool inv = std::isupper(static_cast<unsigned char>(c)) != 0;
    char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    std::string name(1, lower);
    auto it = std::find(spec.generator_names.begin(), spec.generator_names.end(), name);
    if (it == spec.generator_names.end())
      throw std::invalid_argument("unknown generator letter '" + std::string(1, c) + "' in word '" +
                                  word + "'");
    int gen = static_cast<int>(it - spec.generator_names.begin());
    e = multiply(e, generator_element(spec, gen, inv), spec);
  }
  return e;
}

std::string element_label(const GroupSpec& spec, const Element& e) {
  if (is_identity(e)) return "e";
  std::string out;
  int offset = 0;
  for (std::size_t a = 0; a < spec.atoms.size(); ++a) {
    const Atom& atom = spec.atoms[a];
    const AtomElement& c = e.comps[a];
    std::string part;
    if (atom.kind == AtomKind::Free) {
      for (std::int32_t letter : c.word) {
        std::string name = spec.generator_names[offset + std::abs(letter) - 1];
        if (letter < 0) {
          if (name.size() == 1)
            part += static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
          else
            part += name + "^-1";
        } else {
          part += name;
        }
      }
    } else {
      bool first = true;
      for (int i = 0; i < atom.rank; ++i) {
        if (c.exps[i] == 0) continue;
        if (!first) part += "*";
        first = false;
        part += spec.generator_names[offset + i];
        if (c.exps[i] != 1) part += "^" + std::to_string(c.exps[i]);
      }
    }
    if (!part.empty()) {
      if (!out.empty()) out += "*";
      out += part;
    }
    offset += atom.rank;
  }
  return out;
}

std::string element_key(const Element& e) {
  std::string key;
  for (const auto& c : e.comps) {
    if (!c.word.empty()) {
      key.push_back('F');
      std::uint32_t n = static_cast<std::uint32_t>(c.word.size());
      key.append(reinterpret_cast<const char*>(&n), sizeof(n));
      key.append(reinterpret_cast<const char*>(c.word.data()), c.word.size() * sizeof(std::int32_t));
    } else if (!c.exps.empty()) {
      key.push_back('A');
      key.append(reinterpret_cast<const char*>(c.exps.data()), c.exps.size() * sizeof(long long));
    } else {
      key.push_back('f');  // empty free word
    }
  }
  return key;
}

GeneratingSet parse_generating_set(const GroupSpec& spec, const std::string& csv) {
  GeneratingSet gens;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t comma = csv.find(',', start);
    std::string w = csv.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    // trim
    while (!w.empty() && std::isspace(static_cast<unsigned char>(w.front()))) w.erase(w.begin());
    while (!w.empty() && std::isspace(static_cast<unsigned char>(w.back()))) w.pop_back();
    if (!w.empty()) {
      Element e = parse_word(spec, w);
      if (is_identity(e))
        throw std::invalid_argument("generating set must not contain the identity ('" + w + "')");
      gens.elements.push_back(std::move(e));
      gens.words.push_back(w);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (gens.elements.empty()) throw std::invalid_argument("empty generating set");
  return gens;
}

GeneratingSet default_generators(const GroupSpec& spec) {
  GeneratingSet gens;
  for (int i = 0; i < spec.total_rank(); ++i) {
    gens.elements.push_back(generator_element(spec, i));
    gens.words.push_back(spec.generator_names[i]);
  }
  return gens;
}

bool is_involution(const GroupSpec& spec, const Element& s) {
  return !is_identity(s) && is_identity(multiply(s, s, spec));
}

std::size_t vertex_cap_from_env() {
  const char* v = std::getenv("ISOLAB_VERTEX_CAP");
  if (v == nullptr || *v == '\0') return kDefaultVertexCap;
  char* end = nullptr;
  unsigned long long n = std::strtoull(v, &end, 10);
  if (end == v || n == 0) return kDefaultVertexCap;
  return static_cast<std::size_t>(n);
}

int CayleyBall::step(int v, int label) const {
  const Edge* fallback = nullptr;
  for (int eid : incident[v]) {
    const Edge& e = edges[eid];
    if (e.label != label) continue;
    if (e.u == v) return e.v;
    fallback = &e;  // v is the head; right multiplication only matches involutions
  }
  if (fallback != nullptr && is_involution(spec, gens.elements[label])) return fallback->u;
  throw std::logic_error("step: no outgoing edge (vertex not interior?)");
}

CayleyBall cayley_ball(const GroupSpec& spec, const GeneratingSet& gens, int radius,
                       std::size_t cap) {
  if (radius < 0) throw std::invalid_argument("cayley_ball: radius must be >= 0");
  if (cap == 0) cap = vertex_cap_from_env();
  if (cap > (1ull << 23))
    throw std::invalid_argument("cayley_ball: vertex cap above 2^23 is not supported");
  if (gens.elements.size() > (1ull << 17))
    throw std::invalid_argument("cayley_ball: generating set too large");

  CayleyBall ball;
  ball.spec = spec;
  ball.gens = gens;
  ball.radius = radius;

  std::vector<Element> inv_gens;
  inv_gens.reserve(gens.elements.size());
  for (const auto& s : gens.elements) inv_gens.push_back(inverse(s, spec));

  Element id = identity_element(spec);
  ball.vertices.push_back(id);
  ball.sphere.push_back(0);
  ball.incident.emplace_back();
  ball.index.emplace(element_key(id), 0);

  const std::uint64_t n_labels = std::max<std::size_t>(gens.elements.size(), 1);
  std::unordered_set<std::uint64_t> edge_seen;
  auto add_edge = [&](int tail, int head, int label) {
    std::uint64_t lo = static_cast<std::uint64_t>(std::min(tail, head));
    std::uint64_t hi = static_cast<std::uint64_t>(std::max(tail, head));
    std::uint64_t packed = ((lo << 23 | hi) * n_labels) + static_cast<std::uint64_t>(label);
    if (!edge_seen.insert(packed).second) return;
    int eid = static_cast<int>(ball.edges.size());
    ball.edges.push_back({tail, head, label});
    ball.incident[tail].push_back(eid);
    ball.incident[head].push_back(eid);
  };

  std::vector<int> layer{0};
  for (int dist = 0; dist <= radius && !layer.empty(); ++dist) {
    std::vector<int> next_layer;
    for (int u : layer) {
      for (std::size_t j = 0; j < gens.elements.size(); ++j) {
        for (int sign = 0; sign < 2; ++sign) {
          const Element& s = sign == 0 ? gens.elements[j] : inv_gens[j];
          Element w = multiply(ball.vertices[u], s, spec);
          std::string key = element_key(w);
          auto it = ball.index.find(key);
          int v;
          if (it != ball.index.end()) {
            v = it->second;
          } else {
            if (dist == radius) continue;  // outside the ball
            if (ball.vertices.size() >= cap)
              throw ResourceError("cayley_ball: vertex cap " + std::to_string(cap) + " exceeded");
            v = static_cast<int>(ball.vertices.size());
            ball.vertices.push_back(std::move(w));
            ball.sphere.push_back(dist + 1);
            ball.incident.emplace_back();
            ball.index.emplace(std::move(key), v);
            next_layer.push_back(v);
          }
          if (sign == 0)
            add_edge(u, v, static_cast<int>(j));
          else
            add_edge(v, u, static_cast<int>(j));
        }
      }
    }
    if (next_layer.empty() && dist + 1 <= radius && ball.saturated_at < 0)
      ball.saturated_at = dist + 1;
    layer = std::move(next_layer);
  }

  for (int v = 0; v < static_cast<int>(ball.vertices.size()); ++v)
    if (ball.sphere[v] <= radius - 1) ++ball.interior_count;

  if (auto n = spec.order()) {
    if (ball.saturated_at >= 0)
      ball.generates_group = (ball.vertices.size() == *n);
    else if (ball.vertices.size() == *n)
      ball.generates_group = true;
  }
  return ball;
}

}  // namespace isolab
