#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/polynomials.hpp"
#include "symanzik/rational.hpp"
#include "symanzik/variation.hpp"

namespace symanzik {

using Json = nlohmann::ordered_json;

/// On-disk graph description. Vertices are labeled strings; rationals are
/// written as "num/den" or plain integer strings, never floats.
struct GraphDocument {
  int version = 1;
  std::vector<std::string> vertices;
  struct DocEdge {
    int id;
    std::string tail;
    std::string head;
  };
  std::vector<DocEdge> edges;

  struct Momenta {
    int dim = 1;
    std::vector<std::vector<std::string>> form;           // D x D
    std::map<std::string, std::vector<std::string>> p;    // label -> D entries
  };
  std::optional<Momenta> momenta;
  std::optional<std::vector<std::string>> y;                  // optional evaluation point
  std::optional<std::vector<std::vector<std::string>>> A;     // optional m x m perturbation
};

struct LoadedGraph {
  GraphDocument doc;
  Multigraph graph;
  std::optional<MomentumAssignment> momenta;
  std::optional<std::vector<Rat>> y;
  std::optional<Matrix> A;
};

namespace io_detail {

inline int label_index(const GraphDocument& doc, const std::string& label) {
  for (size_t i = 0; i < doc.vertices.size(); ++i)
    if (doc.vertices[i] == label) return static_cast<int>(i);
  throw std::invalid_argument("unknown vertex label: " + label);
}

}  // namespace io_detail

inline GraphDocument parse_graph_document(const Json& j) {
  GraphDocument doc;
  if (!j.is_object()) throw std::invalid_argument("graph document must be a JSON object");
  doc.version = j.value("version", 1);
  if (doc.version != 1) throw std::invalid_argument("unsupported graph document version");
  if (!j.contains("vertices") || !j["vertices"].is_array()) throw std::invalid_argument("missing vertices array");
  for (const auto& v : j["vertices"]) doc.vertices.push_back(v.get<std::string>());
  {
    std::vector<std::string> sorted = doc.vertices;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("duplicate vertex labels");
  }
  if (!j.contains("edges") || !j["edges"].is_array()) throw std::invalid_argument("missing edges array");
  for (const auto& e : j["edges"]) {
    GraphDocument::DocEdge de;
    de.id = e.at("id").get<int>();
    de.tail = e.at("tail").get<std::string>();
    de.head = e.at("head").get<std::string>();
    doc.edges.push_back(std::move(de));
  }
  std::sort(doc.edges.begin(), doc.edges.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (size_t i = 0; i < doc.edges.size(); ++i)
    if (doc.edges[i].id != static_cast<int>(i))
      throw std::invalid_argument("edge ids must be exactly 0..m-1");

  if (j.contains("momenta") && !j["momenta"].is_null()) {
    GraphDocument::Momenta mm;
    const auto& m = j["momenta"];
    mm.dim = m.value("dim", 1);
    if (mm.dim < 1) throw std::invalid_argument("momentum dimension must be >= 1");
    if (m.contains("form")) {
      for (const auto& row : m["form"]) {
        std::vector<std::string> r;
        for (const auto& x : row) r.push_back(x.get<std::string>());
        mm.form.push_back(std::move(r));
      }
    } else {
      for (int i = 0; i < mm.dim; ++i) {
        std::vector<std::string> r(mm.dim, "0");
        r[i] = "1";
        mm.form.push_back(std::move(r));
      }
    }
    if (!m.contains("p")) throw std::invalid_argument("momenta block lacks p");
    for (const auto& [label, vec] : m["p"].items()) {
      std::vector<std::string> r;
      for (const auto& x : vec) r.push_back(x.get<std::string>());
      mm.p.emplace(label, std::move(r));
    }
    doc.momenta = std::move(mm);
  }
  if (j.contains("y") && !j["y"].is_null()) {
    std::vector<std::string> ys;
    for (const auto& x : j["y"]) ys.push_back(x.get<std::string>());
    doc.y = std::move(ys);
  }
  if (j.contains("A") && !j["A"].is_null()) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : j["A"]) {
      std::vector<std::string> r;
      for (const auto& x : row) r.push_back(x.get<std::string>());
      rows.push_back(std::move(r));
    }
    doc.A = std::move(rows);
  }
  return doc;
}

inline Json serialize_graph_document(const GraphDocument& doc) {
  Json j;
  j["version"] = doc.version;
  j["vertices"] = doc.vertices;
  j["edges"] = Json::array();
  for (const auto& e : doc.edges) j["edges"].push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
  if (doc.momenta) {
    Json m;
    m["dim"] = doc.momenta->dim;
    m["form"] = doc.momenta->form;
    Json p = Json::object();
    for (const auto& [label, vec] : doc.momenta->p) p[label] = vec;
    m["p"] = p;
    j["momenta"] = m;
  }
  if (doc.y) j["y"] = *doc.y;
  if (doc.A) j["A"] = *doc.A;
  return j;
}

/// Validates and converts a document to the in-memory types. Conservation is
/// checked here, on load.
inline LoadedGraph realize_graph_document(GraphDocument doc) {
  LoadedGraph out{std::move(doc), Multigraph(1, {}), std::nullopt, std::nullopt, std::nullopt};
  std::vector<std::pair<int, int>> endpoints;
  for (const auto& e : out.doc.edges)
    endpoints.emplace_back(io_detail::label_index(out.doc, e.tail), io_detail::label_index(out.doc, e.head));
  out.graph = Multigraph(static_cast<int>(out.doc.vertices.size()), std::move(endpoints));

  if (out.doc.momenta) {
    const auto& mm = *out.doc.momenta;
    MomentumAssignment mom;
    mom.D = mm.dim;
    mom.form = Matrix(mm.dim, mm.dim);
    if (static_cast<int>(mm.form.size()) != mm.dim) throw std::invalid_argument("form must be D x D");
    for (int i = 0; i < mm.dim; ++i) {
      if (static_cast<int>(mm.form[i].size()) != mm.dim) throw std::invalid_argument("form must be D x D");
      for (int j = 0; j < mm.dim; ++j) mom.form(i, j) = parse_rat(mm.form[i][j]);
    }
    mom.p.assign(out.doc.vertices.size(), std::vector<Rat>(mm.dim, Rat(0)));
    for (const auto& [label, vec] : mm.p) {
      int v = io_detail::label_index(out.doc, label);
      if (static_cast<int>(vec.size()) != mm.dim) throw std::invalid_argument("momentum vector has wrong dimension");
      for (int a = 0; a < mm.dim; ++a) mom.p[v][a] = parse_rat(vec[a]);
    }
    mom.validate(out.graph.n());
    out.momenta = std::move(mom);
  }
  if (out.doc.y) {
    std::vector<Rat> y;
    for (const auto& s : *out.doc.y) y.push_back(parse_rat(s));
    if (static_cast<int>(y.size()) != out.graph.m()) throw std::invalid_argument("y has wrong length");
    out.y = std::move(y);
  }
  if (out.doc.A) {
    int m = out.graph.m();
    if (static_cast<int>(out.doc.A->size()) != m) throw std::invalid_argument("A must be m x m");
    Matrix A(m, m);
    for (int i = 0; i < m; ++i) {
      if (static_cast<int>((*out.doc.A)[i].size()) != m) throw std::invalid_argument("A must be m x m");
      for (int j = 0; j < m; ++j) A(i, j) = parse_rat((*out.doc.A)[i][j]);
    }
    out.A = std::move(A);
  }
  return out;
}

inline LoadedGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& ex) {
    throw std::invalid_argument(std::string("bad JSON: ") + ex.what());
  }
  try {
    return realize_graph_document(parse_graph_document(j));
  } catch (const Json::exception& ex) {
    // json access errors derive from logic_error; they are input errors here
    throw std::invalid_argument(std::string("bad graph document: ") + ex.what());
  }
}

/// Round-trip normal form: parse -> serialize. Idempotent after the first
/// normalization (edges sorted by id, fixed key order).
inline Json normalize_graph_document(const Json& j) {
  return serialize_graph_document(parse_graph_document(j));
}

inline Json polynomial_to_json(const SymanzikPolynomial& poly) {
  Json terms = Json::array();
  for (const auto& [support, coeff] : poly.terms) {
    Json t;
    t["edges"] = support.ids();
    t["coeff"] = rat_str(coeff);
    terms.push_back(std::move(t));
  }
  Json j;
  j["degree"] = poly.degree;
  j["terms"] = std::move(terms);
  return j;
}

inline Json sweep_to_json(const SweepReport& rep) {
  Json rows = Json::array();
  for (const SweepRow& r : rep.rows) {
    Json row;
    row["t"] = rat_str(r.t);
    row["f1"] = rat_str(r.f1);
    row["f2"] = rat_str(r.f2);
    if (r.singular) {
      row["singular"] = true;
    } else {
      row["g1"] = rat_str(r.g1);
      row["g2"] = rat_str(r.g2);
      row["Delta"] = rat_str(r.delta);
      row["g1_over_f1"] = rat_str(r.g1_over_f1);
    }
    rows.push_back(std::move(row));
  }
  Json j;
  j["rows"] = std::move(rows);
  j["any_singular"] = rep.any_singular;
  j["tail_range"] = rat_str(rep.tail_range);
  j["delta_at_tmax"] = rat_str(rep.delta_at_tmax);
  Json diffs = Json::array();
  for (const Rat& d : rep.tail_diffs) diffs.push_back(rat_str(d));
  j["tail_diffs"] = std::move(diffs);
  j["diffs_nonincreasing"] = rep.diffs_nonincreasing;
  j["range_ok"] = rep.range_ok;
  j["c1"] = rat_str(rep.c1);
  j["c2"] = rat_str(rep.c2);
  j["pass"] = rep.pass;
  return j;
}

}  // namespace symanzik
