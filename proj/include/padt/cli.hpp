#pragma once

// The pipeline behind the command-line tool: encode -> classify ->
// invariants -> timeseries, plus exporters. `run` reads one input document
// and writes one output document.

#include <cmath>
#include <istream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "padt/classifier.hpp"
#include "padt/error.hpp"
#include "padt/json_io.hpp"
#include "padt/string_encoder.hpp"
#include "padt/timeseries.hpp"
#include "padt/tree_invariants.hpp"

namespace padt {

struct RunConfig {
  std::string command;
  std::optional<int> prime;
  std::optional<int> degree;
  std::string reps = "poly";
  std::string preset;
  std::string alphabet;  // comma separated, blank first
  std::string convention = "canonical";
  int precision = kDefaultPrecision;
  bool normalize = false;
  std::string format = "json";
  std::optional<int> cutoff_k;
  std::string u;  // rational, e.g. "1" or "3/2"; empty = estimate
};

/// 0 success, 2 bad input or configuration, 3 precision, 4 unsupported
/// operation, 5 non-discrete group, 1 anything else.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precision: return 3;
    case ErrorKind::unsupported:
    case ErrorKind::no_translation: return 4;
    case ErrorKind::non_discrete: return 5;
    default: return 2;
  }
}

namespace cli {

struct StringRecord {
  std::string label;
  std::string text;
};

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

/// One string per non-empty line, labelled s1, s2, ...; FASTA when the first
/// non-empty line starts with '>' (the header becomes the label).
inline std::vector<StringRecord> read_strings(const std::string& text) {
  std::vector<StringRecord> out;
  std::istringstream in(text);
  std::string line;
  bool fasta = false;
  bool decided = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (!decided) {
      fasta = line.front() == '>';
      decided = true;
    }
    if (fasta) {
      if (line.front() == '>') {
        out.push_back({trim(line.substr(1)), ""});
        if (out.back().label.empty()) out.back().label = "s" + std::to_string(out.size());
      } else {
        out.back().text += line;
      }
    } else {
      out.push_back({"s" + std::to_string(out.size() + 1), line});
    }
  }
  return out;
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline AlphabetCode make_code(const RunConfig& cfg, std::vector<std::string>& warnings) {
  if (!cfg.preset.empty()) {
    if (!cfg.alphabet.empty()) fail(ErrorKind::configuration, "give either --preset or --alphabet");
    AlphabetCode code = preset(cfg.preset);
    if (cfg.prime && *cfg.prime != code.field().prime()) {
      warnings.push_back("--prime ignored: preset " + cfg.preset + " fixes p = " + std::to_string(code.field().prime()));
    }
    return code;
  }
  if (cfg.alphabet.empty()) fail(ErrorKind::configuration, "strings need --preset or --alphabet");
  const auto symbols = split_commas(cfg.alphabet);
  const int p = cfg.prime.value_or(2);
  const RepSystem reps = parse_reps(cfg.reps);
  if (!cfg.degree) return build_code(symbols, p, reps);
  if (*cfg.degree < minimal_degree(symbols.size(), p)) {
    fail(ErrorKind::configuration, "--degree too small for an alphabet of " + std::to_string(symbols.size()) + " symbols");
  }
  const FieldDescriptor field = FieldDescriptor::make(p, *cfg.degree, reps);
  std::vector<RepLabel> labels;
  for (std::uint32_t i = 0; i < symbols.size(); ++i) labels.push_back(field.label_at(i));
  return AlphabetCode(symbols, field, std::move(labels));
}

inline FieldDescriptor config_field(const RunConfig& cfg) {
  return FieldDescriptor::make(cfg.prime.value_or(2), cfg.degree.value_or(1), parse_reps(cfg.reps));
}

inline bool looks_like_json(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  return first != std::string::npos && (text[first] == '[' || text[first] == '{');
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    fail(ErrorKind::invalid_input, std::string("input is not valid JSON: ") + e.what());
  }
}

inline bool is_dendrogram(const Json& j) { return j.is_object() && j.contains("internal_edges"); }

/// Accepts [{label, number}], {label: number} or {field, data: [...]}.
inline std::vector<LabeledPoint> read_records(const Json& doc, const RunConfig& cfg, FieldDescriptor& field) {
  const Json* records = &doc;
  if (doc.is_object() && doc.contains("data")) {
    if (doc.contains("field")) field = field_from_json(doc.at("field"));
    records = &doc.at("data");
  }
  std::vector<LabeledPoint> out;
  auto parse_one = [&](const std::string& label, const Json& value, std::size_t index) {
    const std::string where = "record " + std::to_string(index) + " ('" + label + "')";
    if (!value.is_string()) fail(ErrorKind::invalid_input, where + ": number must be a string");
    try {
      out.emplace_back(label, parse_padic(value.get<std::string>(), field, cfg.precision));
    } catch (const Error& e) {
      fail(e.kind(), where + ": " + e.message());
    }
  };
  if (records->is_object()) {
    std::size_t i = 0;
    for (const auto& [label, value] : records->items()) parse_one(label, value, i++);
    return out;
  }
  if (!records->is_array()) fail(ErrorKind::invalid_input, "expected a list of {label, number} records");
  for (std::size_t i = 0; i < records->size(); ++i) {
    const Json& r = (*records)[i];
    if (!r.is_object() || !r.contains("label") || !r.contains("number")) {
      fail(ErrorKind::invalid_input, "record " + std::to_string(i) + ": needs 'label' and 'number'");
    }
    parse_one(r.at("label").get<std::string>(), r.at("number"), i);
  }
  return out;
}

/// Data from strings (encoded) or from JSON records.
inline std::vector<LabeledPoint> read_data(const std::string& text, const RunConfig& cfg, std::vector<std::string>& warnings) {
  if (looks_like_json(text)) {
    FieldDescriptor field = config_field(cfg);
    return read_records(parse_json(text), cfg, field);
  }
  const AlphabetCode code = make_code(cfg, warnings);
  std::vector<LabeledPoint> out;
  const auto strings = read_strings(text);
  for (std::size_t i = 0; i < strings.size(); ++i) {
    try {
      out.emplace_back(strings[i].label, encode_string(code, strings[i].text));
    } catch (const Error& e) {
      fail(e.kind(), "record " + std::to_string(i) + " ('" + strings[i].label + "'): " + e.message());
    }
  }
  return out;
}

inline Json normality_json(const Normality& n) {
  return {{"has_zero", n.has_zero}, {"has_one", n.has_one}, {"in_unit_disc", n.in_unit_disc}, {"normal", n.normal()}};
}

inline Json warnings_json(const std::vector<std::string>& w) { return Json(w); }

inline double tidy(double x) { return std::fabs(x) < 1e-12 ? 0.0 : x; }

inline Json matrix_json(const SymbolicMatrix& m) {
  return Json::array({Json::array({m.alpha.to_string(), m.beta.to_string()}),
                      Json::array({m.gamma.to_string(), m.delta.to_string()})});
}

inline Json disc_json(const Disc& d) { return {{"center", to_string(d.center)}, {"radius_exp", d.radius_exp}}; }

inline Rational parse_rational(const std::string& s) {
  try {
    const auto slash = s.find('/');
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const long long n = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(n);
    }
    const long long n = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    const std::string rest = s.substr(slash + 1);
    const long long d = std::stoll(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    return Rational(n, d);
  } catch (const std::logic_error&) {
    fail(ErrorKind::configuration, "'" + s + "' is not a rational number");
  }
}

inline Json curve_json(const CurveData& c) {
  Json j;
  j["kind"] = c.kind;
  j["status"] = c.status;
  j["genus"] = c.genus;
  j["base_field"] = field_to_json(c.base_field);
  Json gens = Json::array();
  for (const auto& g : c.generators) gens.push_back(matrix_json(g));
  j["generators"] = gens;
  if (c.quotient) {
    const auto b = c.quotient->graph.betti();
    const auto bt = c.quotient->graph.betti_by_traversal();
    j["betti1"] = b.h1;
    j["betti1_traversal"] = bt.h1;
    Json edges = Json::array();
    for (const auto& [f, g] : c.quotient->graph.edges().internal) {
      edges.push_back({c.quotient->graph.boundary(f), c.quotient->graph.boundary(g)});
    }
    Json lengths = Json::array();
    for (const Rational& l : c.quotient->lengths) lengths.push_back(l.to_string());
    j["quotient"] = {{"vertices", c.quotient->graph.vertex_count()}, {"edges", edges}, {"lengths", lengths}};
  } else {
    j["betti1"] = nullptr;
    j["quotient"] = nullptr;
  }
  if (c.bridge_length) j["bridge_length"] = c.bridge_length->to_string();
  j["orbits"] = c.orbits;
  std::set<long> classes(c.orbits.begin(), c.orbits.end());
  j["orbit_classes"] = classes.size();
  return j;
}

inline void write_tree(const ClusterHierarchy& h, const RunConfig& cfg, const std::vector<std::string>& warnings,
                       std::ostream& out) {
  if (cfg.format == "dot") {
    out << to_dot(h.dendrogram);
    return;
  }
  if (cfg.format == "newick") {
    out << to_newick(h.dendrogram) << "\n";
    return;
  }
  Json j = hierarchy_to_json(h);
  j["normality"] = normality_json(normality(h.coding));
  j["warnings"] = warnings_json(warnings);
  out << j.dump(2) << "\n";
}

inline int cmd_encode(const RunConfig& cfg, const std::string& text, std::ostream& out, std::vector<std::string>& warnings) {
  if (looks_like_json(text)) {
    const Json doc = parse_json(text);
    if (!is_dendrogram(doc)) fail(ErrorKind::invalid_input, "encode expects strings or a dendrogram JSON object");
    const ProjectiveDendrogram d = dendrogram_from_json(doc);
    const EncodedDendrogram enc =
        encode_dendrogram(d, parse_convention(cfg.convention), cfg.prime.value_or(2), parse_reps(cfg.reps));
    Json j;
    j["field"] = field_to_json(enc.field);
    j["convention"] = cfg.convention;
    Json data = Json::array();
    for (const auto& [label, x] : enc.coding) data.push_back({{"label", label}, {"number", to_string(x)}});
    j["data"] = data;
    j["normality"] = normality_json(normality(enc.coding));
    j["warnings"] = warnings_json(warnings);
    out << j.dump(2) << "\n";
    return 0;
  }
  const AlphabetCode code = make_code(cfg, warnings);
  const auto strings = read_strings(text);
  Json j;
  j["field"] = field_to_json(code.field());
  if (!cfg.preset.empty()) j["preset"] = cfg.preset;
  j["alphabet"] = code.symbols();
  Json data = Json::array();
  for (std::size_t i = 0; i < strings.size(); ++i) {
    try {
      data.push_back({{"label", strings[i].label},
                      {"string", strings[i].text},
                      {"number", to_string(encode_string(code, strings[i].text))}});
    } catch (const Error& e) {
      fail(e.kind(), "record " + std::to_string(i) + " ('" + strings[i].label + "'): " + e.message());
    }
  }
  j["data"] = data;
  if (strings.size() < 2) warnings.push_back("a single point yields a degenerate dendrogram");
  if (cfg.cutoff_k) {
    Json dist = Json::array();
    for (std::size_t i = 0; i < strings.size(); ++i) {
      for (std::size_t k = i + 1; k < strings.size(); ++k) {
        const BaireDistance d = baire_distance(code, strings[i].text, strings[k].text, cfg.cutoff_k);
        dist.push_back({{"a", strings[i].label}, {"b", strings[k].label}, {"distance", d.to_string()}});
      }
    }
    j["distances"] = dist;
  }
  j["warnings"] = warnings_json(warnings);
  out << j.dump(2) << "\n";
  return 0;
}

inline ClusterHierarchy classify_input(const RunConfig& cfg, const std::string& text, std::vector<std::string>& warnings) {
  std::vector<LabeledPoint> data = read_data(text, cfg, warnings);
  if (data.empty()) fail(ErrorKind::invalid_input, "no data records");
  if (cfg.normalize) data = normalize_shift(data);
  ClusterHierarchy h = classify(data);
  warnings.insert(warnings.end(), h.warnings.begin(), h.warnings.end());
  const Normality n = normality(h.coding);
  if (!n.normal()) {
    std::string missing;
    if (!n.has_zero) missing += " 0";
    if (!n.has_one) missing += " 1";
    if (!n.in_unit_disc) missing += " (data outside O_K)";
    warnings.push_back("coding is not normal: missing" + missing);
  }
  return h;
}

inline int cmd_classify(const RunConfig& cfg, const std::string& text, std::ostream& out, std::vector<std::string>& warnings) {
  const ClusterHierarchy h = classify_input(cfg, text, warnings);
  write_tree(h, cfg, warnings, out);
  return 0;
}

inline Json invariants_json(const ProjectiveDendrogram& d) {
  const BalanceReport r = balance_report(d);
  Json j;
  j["volume"] = r.volume;
  j["weights"] = r.weights;
  j["balance"] = {{"re", tidy(r.balance.real())}, {"im", tidy(r.balance.imag())}};
  j["balanced"] = r.balanced;
  j["exact_zero"] = r.exact_zero;
  Json edges = Json::array();
  for (const InternalEdge& e : dagger_tree(d).edges) {
    edges.push_back({{"a", d.vertex_id(e.parent)}, {"b", d.vertex_id(e.child)}, {"len", e.length}});
  }
  j["dagger_edges"] = edges;
  return j;
}

inline int cmd_invariants(const RunConfig& cfg, const std::string& text, std::ostream& out, std::vector<std::string>& warnings) {
  if (looks_like_json(text)) {
    const Json doc = parse_json(text);
    if (is_dendrogram(doc)) {
      out << invariants_json(dendrogram_from_json(doc)).dump(2) << "\n";
      return 0;
    }
    if (doc.is_array() && !doc.empty() && is_dendrogram(doc.front())) {
      Json all = Json::array();
      for (std::size_t i = 0; i < doc.size(); ++i) {
        try {
          all.push_back(invariants_json(dendrogram_from_json(doc[i])));
        } catch (const Error& e) {
          fail(e.kind(), "dendrogram " + std::to_string(i) + ": " + e.message());
        }
      }
      out << all.dump(2) << "\n";
      return 0;
    }
  }
  const ClusterHierarchy h = classify_input(cfg, text, warnings);
  out << invariants_json(h.dendrogram).dump(2) << "\n";
  return 0;
}

inline int cmd_timeseries(const RunConfig& cfg, const std::string& text, std::ostream& out, std::vector<std::string>& warnings) {
  const Json doc = parse_json(text);
  FieldDescriptor field = config_field(cfg);
  const Json* frames = &doc;
  if (doc.is_object()) {
    if (doc.contains("field")) field = field_from_json(doc.at("field"));
    if (!doc.contains("frames")) fail(ErrorKind::invalid_input, "expected 'frames'");
    frames = &doc.at("frames");
  }
  if (!frames->is_array() || frames->empty()) fail(ErrorKind::invalid_input, "expected a non-empty array of frames");
  std::vector<std::vector<LabeledPoint>> codings;
  for (std::size_t t = 0; t < frames->size(); ++t) {
    try {
      codings.push_back(read_records((*frames)[t], cfg, field));
    } catch (const Error& e) {
      fail(e.kind(), "frame t=" + std::to_string(t) + ": " + e.message());
    }
  }
  const DendrogramSeries series = DendrogramSeries::from_codings(codings);
  const std::vector<long> balances = balance_series(series);
  const VelocityEstimate v = estimate_velocity(balances);
  const FlowReport flow = classify_flow(series, v.c);

  Json j;
  j["field"] = field_to_json(series.field());
  j["balances"] = balances;
  Json vel = {{"d", v.c.num()}, {"e", v.c.den()}, {"c", v.c.to_string()}, {"method", v.method}, {"exact", v.exact}};
  vel["period"] = v.period ? Json(*v.period) : Json(nullptr);
  vel["differences"] = v.differences;
  j["velocity"] = vel;
  if (!v.exact) warnings.push_back("velocity from least squares, not exact");
  j["flow"] = {{"kind", to_string(flow.kind)}, {"t0", flow.t0 ? Json(*flow.t0) : Json(nullptr)}, {"note", flow.note}};

  const auto branches = invariant_branches(series);
  std::optional<InvariantBranch> axis_branch;
  for (const InvariantBranch& b : branches) {
    if (!b.off_axis || b.labels.size() < 2) continue;
    if (!axis_branch || b.labels.size() > axis_branch->labels.size()) axis_branch = b;
  }
  const auto main_branch = invariant_branch(series);
  j["invariant_branch"] = main_branch ? Json{{"root", disc_json(main_branch->root)},
                                             {"labels", main_branch->labels},
                                             {"off_axis", main_branch->off_axis}}
                                      : Json(nullptr);

  Json curve = nullptr;
  if (flow.kind == FlowKind::translation_at_root) {
    CurveData c = tate_curve(v.c, series.field(), balances);
    if (axis_branch) {
      const auto [a, b] = geodesic_endpoints(axis_branch->root);
      Rational u(1);
      if (!cfg.u.empty()) {
        u = parse_rational(cfg.u);
      } else if (auto measured = branch_translation_length(series, *axis_branch)) {
        u = *measured;
      }
      c = mumford_curve(c, a, b, u);
      curve = curve_json(c);
      curve["axis"] = {{"a", to_string(a)}, {"b", to_string(b)}, {"u", u.to_string()}, {"branch", axis_branch->labels}};
    } else {
      curve = curve_json(c);
    }
  } else if (flow.kind == FlowKind::flow_from_infinity) {
    warnings.push_back("flow from infinity: curve analysis unsupported");
  }
  j["curve"] = curve;
  j["warnings"] = warnings_json(warnings);
  out << j.dump(2) << "\n";
  return 0;
}

inline int cmd_export(const RunConfig& cfg, const std::string& text, std::ostream& out, std::vector<std::string>& warnings) {
  if (looks_like_json(text)) {
    const Json doc = parse_json(text);
    if (is_dendrogram(doc)) {
      if (doc.contains("vertex_disc") && doc.contains("field")) {
        write_tree(hierarchy_from_json(doc, cfg.precision), cfg, warnings, out);
        return 0;
      }
      const ProjectiveDendrogram d = dendrogram_from_json(doc);
      if (cfg.format == "dot") {
        out << to_dot(d);
      } else if (cfg.format == "newick") {
        out << to_newick(d) << "\n";
      } else {
        out << dendrogram_to_json(d).dump(2) << "\n";
      }
      return 0;
    }
  }
  const ClusterHierarchy h = classify_input(cfg, text, warnings);
  write_tree(h, cfg, warnings, out);
  return 0;
}

}  // namespace cli

/// Runs one command; errors are reported on `err` as `error: <kind>: <message>`
/// and mapped to exit codes.
inline int run(const RunConfig& cfg, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<std::string> warnings;
  int status = 0;
  try {
    if (cfg.format != "json" && cfg.format != "dot" && cfg.format != "newick") {
      fail(ErrorKind::configuration, "unknown format '" + cfg.format + "' (json|dot|newick)");
    }
    const bool tree_output = cfg.command == "classify" || cfg.command == "export";
    if (cfg.format != "json" && !tree_output) {
      fail(ErrorKind::configuration, "--format " + cfg.format + " only applies to classify and export");
    }
    if (cfg.precision < 1) fail(ErrorKind::configuration, "--precision must be positive");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (cfg.command == "encode") status = cli::cmd_encode(cfg, text, out, warnings);
    else if (cfg.command == "classify") status = cli::cmd_classify(cfg, text, out, warnings);
    else if (cfg.command == "invariants") status = cli::cmd_invariants(cfg, text, out, warnings);
    else if (cfg.command == "timeseries") status = cli::cmd_timeseries(cfg, text, out, warnings);
    else if (cfg.command == "export") status = cli::cmd_export(cfg, text, out, warnings);
    else fail(ErrorKind::configuration, "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  return status;
}

}  // namespace padt
