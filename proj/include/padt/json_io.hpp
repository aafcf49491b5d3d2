#pragma once

// JSON, DOT and Newick forms of dendrograms and hierarchies.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "padt/classifier.hpp"
#include "padt/dendrogram.hpp"
#include "padt/error.hpp"
#include "padt/padic.hpp"
#include "padt/residue_field.hpp"

namespace padt {

using Json = nlohmann::ordered_json;

inline Json field_to_json(const FieldDescriptor& f) {
  Json j;
  j["prime"] = f.prime();
  j["degree"] = f.degree();
  if (f.ramification() > 1) j["ramification"] = f.ramification();
  j["reps"] = to_string(f.reps());
  j["modulus"] = f.modulus();
  return j;
}

inline RepSystem parse_reps(const std::string& s) {
  if (s == "poly" || s == "polynomial") return RepSystem::polynomial;
  if (s == "teich" || s == "teichmuller") return RepSystem::teichmuller;
  fail(ErrorKind::configuration, "unknown representative system '" + s + "' (poly|teich)");
}

inline FieldDescriptor field_from_json(const Json& j) {
  try {
    std::optional<FpPolynomial> modulus;
    if (j.contains("modulus")) modulus = j.at("modulus").get<FpPolynomial>();
    return FieldDescriptor::make(j.at("prime").get<int>(), j.value("degree", 1), parse_reps(j.value("reps", "poly")),
                                 j.value("ramification", 1), modulus);
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("bad field description: ") + e.what());
  }
}

inline Json dendrogram_to_json(const ProjectiveDendrogram& d) {
  Json j;
  Json vertices = Json::array();
  for (std::size_t v = 0; v < d.vertex_count(); ++v) vertices.push_back(d.vertex_id(v));
  j["vertices"] = vertices;
  j["root"] = d.vertex_id(d.root());
  Json edges = Json::array();
  for (const InternalEdge& e : d.internal_edges()) {
    edges.push_back({{"a", d.vertex_id(e.parent)}, {"b", d.vertex_id(e.child)}, {"len", e.length}});
  }
  j["internal_edges"] = edges;
  Json leaves = Json::array();
  for (const DataLeaf& l : d.leaves()) leaves.push_back({{"vertex", d.vertex_id(l.vertex)}, {"label", l.label}});
  j["leaves"] = leaves;
  j["infinity_at"] = d.vertex_id(d.root());
  Json order = Json::object();
  for (std::size_t v : d.preorder()) {
    Json names = Json::array();
    for (const DendrogramChild& c : d.children(v)) {
      names.push_back(c.is_leaf() ? d.leaves()[c.index].label : d.vertex_id(c.index));
    }
    order[d.vertex_id(v)] = names;
  }
  j["child_order"] = order;
  return j;
}

/// Reads the dendrogram schema; `child_order` is optional (default order
/// otherwise). Single-child vertices are accepted with allow_unstable.
inline ProjectiveDendrogram dendrogram_from_json(const Json& j, bool allow_unstable = false) {
  try {
    ProjectiveDendrogram::Builder b;
    for (const auto& v : j.at("vertices")) b.add_vertex(v.get<std::string>());
    for (const auto& e : j.at("internal_edges")) {
      b.add_edge(e.at("a").get<std::string>(), e.at("b").get<std::string>(), e.at("len").get<int>());
    }
    for (const auto& l : j.at("leaves")) b.add_leaf(l.at("vertex").get<std::string>(), l.at("label").get<std::string>());
    b.set_root(j.at("root").get<std::string>());
    if (j.contains("infinity_at")) b.set_infinity_at(j.at("infinity_at").get<std::string>());
    if (j.contains("child_order")) {
      for (const auto& [vertex, names] : j.at("child_order").items()) {
        b.set_child_order(vertex, names.get<std::vector<std::string>>());
      }
    }
    return b.build(!allow_unstable);
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("bad dendrogram JSON: ") + e.what());
  }
}

inline Json coding_to_json(const std::vector<LabeledPoint>& coding) {
  Json j = Json::object();
  for (const auto& [label, x] : coding) j[label] = to_string(x);
  return j;
}

inline Json hierarchy_to_json(const ClusterHierarchy& h) {
  Json j = dendrogram_to_json(h.dendrogram);
  j["field"] = field_to_json(h.field());
  Json discs = Json::object();
  for (std::size_t v = 0; v < h.dendrogram.vertex_count(); ++v) {
    discs[h.dendrogram.vertex_id(v)] = {{"center", to_string(h.vertex_disc[v].center)},
                                        {"radius_exp", h.vertex_disc[v].radius_exp}};
  }
  j["vertex_disc"] = discs;
  j["coding"] = coding_to_json(h.coding);
  return j;
}

/// Reads a hierarchy written by hierarchy_to_json.
inline ClusterHierarchy hierarchy_from_json(const Json& j, int precision = kDefaultPrecision) {
  ProjectiveDendrogram d = dendrogram_from_json(j);
  try {
    const FieldDescriptor field = field_from_json(j.at("field"));
    std::vector<Disc> discs;
    for (std::size_t v = 0; v < d.vertex_count(); ++v) {
      const Json& e = j.at("vertex_disc").at(d.vertex_id(v));
      discs.push_back(Disc{parse_padic(e.at("center").get<std::string>(), field, precision), e.at("radius_exp").get<int>()});
    }
    std::vector<LabeledPoint> coding;
    for (const auto& [label, text] : j.at("coding").items()) {
      coding.emplace_back(label, parse_padic(text.get<std::string>(), field, precision));
    }
    return ClusterHierarchy{std::move(d), std::move(discs), std::move(coding), {}};
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("bad hierarchy JSON: ") + e.what());
  }
}

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline std::string newick_name(const std::string& s) {
  if (s.find_first_of(" ()[]':;,") == std::string::npos) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

inline void newick_subtree(const ProjectiveDendrogram& d, std::size_t v, std::string& out) {
  out += "(";
  bool first = true;
  for (const DendrogramChild& c : d.children(v)) {
    if (!first) out += ",";
    first = false;
    if (c.is_leaf()) {
      out += newick_name(d.leaves()[c.index].label);
    } else {
      newick_subtree(d, c.index, out);
      out += ":" + std::to_string(d.internal_edges()[*d.parent_edge(c.index)].length);
    }
  }
  out += ")" + newick_name(d.vertex_id(v));
}

}  // namespace detail

/// Vertices as `v:<id>`, data as `d:<label>`, the infinity end as `inf`;
/// internal edges carry `len`.
inline std::string to_dot(const ProjectiveDendrogram& d) {
  using detail::dot_quote;
  std::ostringstream os;
  os << "digraph dendrogram {\n";
  os << "  " << dot_quote("inf") << " [shape=point];\n";
  for (std::size_t v = 0; v < d.vertex_count(); ++v) {
    os << "  " << dot_quote("v:" + d.vertex_id(v)) << " [label=" << dot_quote(d.vertex_id(v)) << "];\n";
  }
  for (const DataLeaf& l : d.leaves()) {
    os << "  " << dot_quote("d:" + l.label) << " [shape=plaintext, label=" << dot_quote(l.label) << "];\n";
  }
  os << "  " << dot_quote("inf") << " -> " << dot_quote("v:" + d.vertex_id(d.root())) << ";\n";
  for (std::size_t v : d.preorder()) {
    for (const DendrogramChild& c : d.children(v)) {
      if (c.is_leaf()) {
        os << "  " << dot_quote("v:" + d.vertex_id(v)) << " -> " << dot_quote("d:" + d.leaves()[c.index].label) << ";\n";
      } else {
        const int len = d.internal_edges()[*d.parent_edge(c.index)].length;
        os << "  " << dot_quote("v:" + d.vertex_id(v)) << " -> " << dot_quote("v:" + d.vertex_id(c.index)) << " [len=" << len
           << ", label=\"" << len << "\"];\n";
      }
    }
  }
  os << "}\n";
  return os.str();
}

/// Newick with branch lengths mu on internal edges and named internal nodes;
/// the infinity edge is dropped (the root is Newick's implicit root).
inline std::string to_newick(const ProjectiveDendrogram& d) {
  std::string out;
  detail::newick_subtree(d, d.root(), out);
  return out + ";";
}

}  // namespace padt
