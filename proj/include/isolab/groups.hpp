#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace isolab {

struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

enum class AtomKind { Free, FreeAbelian, FiniteCyclic };

// One direct factor of the group: F_k, Z^d or (Z/m)^d.
struct Atom {
  AtomKind kind;
  int rank;
  long long modulus;  // FiniteCyclic only
};

// A finitely generated group with a decidable normal form, given as a
// direct product of atoms (products are flattened left to right).
// Generator names default to a, b, c, ...
struct GroupSpec {
  std::vector<Atom> atoms;
  std::vector<std::string> generator_names;
  std::string text;

  int total_rank() const {
    int r = 0;
    for (const auto& a : atoms) r += a.rank;
    return r;
  }
  // Group order, when finite.
  std::optional<unsigned long long> order() const;
};

struct GroupParseError : std::runtime_error {
  std::size_t position;
  GroupParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// Grammar: F<k> | Z[^<d>] | Zmod<m>[^<d>] | (<spec>) x (<spec>), whitespace free.
GroupSpec parse_group_spec(const std::string& text);

struct AtomElement {
  std::vector<std::int32_t> word;  // Free atoms: reduced word, signed 1-based letters
  std::vector<long long> exps;     // abelian atoms: exponent vector (mod m if finite)
  bool operator==(const AtomElement&) const = default;
};

// Canonical normal form: one component per atom. Equal elements have
// equal components, so == is group equality.
struct Element {
  std::vector<AtomElement> comps;
  bool operator==(const Element&) const = default;
};

Element identity_element(const GroupSpec& spec);
bool is_identity(const Element& e);
Element generator_element(const GroupSpec& spec, int gen_index, bool inv = false);
Element multiply(const Element& g, const Element& h, const GroupSpec& spec);
Element inverse(const Element& g, const GroupSpec& spec);

// Word over generator letters, uppercase meaning inverse: "aB" = a * b^-1.
Element parse_word(const GroupSpec& spec, const std::string& word);
std::string element_label(const GroupSpec& spec, const Element& e);

// Injective byte encoding of the normal form, used as hash key.
std::string element_key(const Element& e);

// Ordered generating multiset; the identity is rejected.
struct GeneratingSet {
  std::vector<Element> elements;
  std::vector<std::string> words;
};

GeneratingSet parse_generating_set(const GroupSpec& spec, const std::string& csv);
GeneratingSet default_generators(const GroupSpec& spec);
bool is_involution(const GroupSpec& spec, const Element& s);

inline constexpr std::size_t kDefaultVertexCap = 2'000'000;
std::size_t vertex_cap_from_env();  // ISOLAB_VERTEX_CAP, else kDefaultVertexCap

// Radius-r ball of the Cayley graph of (spec, gens), as an induced subgraph.
// Vertices are indexed in BFS order, so sphere numbers are nondecreasing and
// the interior (sphere <= radius-1) is a prefix. Edges are undirected and
// deduplicated per (unordered pair, generator label); an involutive generator
// contributes a single edge. Edge{u,v,label} means v = u * gens[label].
struct CayleyBall {
  GroupSpec spec;
  GeneratingSet gens;
  int radius = 0;

  std::vector<Element> vertices;
  std::vector<int> sphere;
  struct Edge {
    int u, v, label;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> incident;  // vertex -> edge ids
  int interior_count = 0;
  int saturated_at = -1;                 // first distance whose sphere is empty, -1 if none seen
  std::optional<bool> generates_group;   // decidable for finite groups only

  std::unordered_map<std::string, int> index;

  int find(const Element& e) const {
    auto it = index.find(element_key(e));
    return it == index.end() ? -1 : it->second;
  }
  int degree(int v) const { return static_cast<int>(incident[v].size()); }
  bool interior(int v) const { return sphere[v] <= radius - 1; }
  int other_end(int edge_id, int v) const {
    const Edge& e = edges[edge_id];
    return e.u == v ? e.v : e.u;
  }
  // v * gens[label], resolved through the edge list (v must be interior).
  int step(int v, int label) const;
};

CayleyBall cayley_ball(const GroupSpec& spec, const GeneratingSet& gens, int radius,
                       std::size_t cap = 0 /* 0 = env or default */);

}  // namespace isolab
