#include "qha/workbench.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace qha {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// ---- export -----------------------------------------------------------------

ordered_json coords(const Tensor& t) {
  ordered_json a = ordered_json::array();
  for (int i = 0; i < t.dim(); ++i) a.push_back(t.coeff(Key(i)).str());
  return a;
}

ordered_json coords(const Functional& f) {
  ordered_json a = ordered_json::array();
  for (const auto& c : f.coords) a.push_back(c.str());
  return a;
}

// Entries [lead..., idx..., "c"], already in lexicographic order because
// keys are visited in increasing order.
void push_entries(ordered_json& out, const std::vector<int>& lead, const Tensor& t) {
  KeyCodec kc = t.codec();
  std::vector<int> idx(static_cast<std::size_t>(t.rank()));
  for (const auto& [k, c] : t.terms()) {
    kc.unpack(k, idx.data());
    ordered_json e = ordered_json::array();
    for (int l : lead) e.push_back(l);
    for (int i : idx) e.push_back(i);
    e.push_back(c.str());
    out.push_back(std::move(e));
  }
}

ordered_json entries(const Tensor& t) {
  ordered_json a = ordered_json::array();
  push_entries(a, {}, t);
  return a;
}

ordered_json columns(const LinearOperator& op) {
  ordered_json a = ordered_json::array();
  for (std::size_t i = 0; i < op.num_columns(); ++i) push_entries(a, {int(i)}, op.column(Key(i)));
  return a;
}

// ---- import -----------------------------------------------------------------

const char* const kKeys[] = {"name", "field", "dim",  "basis",     "unit",    "counit",  "alpha",
                             "beta", "mult",  "coproduct", "phi", "phi_inv", "antipode"};

struct Reader {
  const json& doc;
  Field field = Field::Q;
  int n = 0;

  const json& at(const std::string& key) const {
    auto it = doc.find(key);
    if (it == doc.end()) throw SchemaError("/" + key, "missing required member");
    return *it;
  }

  Scalar scalar(const json& v, const std::string& path) const {
    if (!v.is_string()) throw SchemaError(path, "expected a scalar string");
    Scalar s;
    try {
      s = Scalar::parse(v.get<std::string>());
    } catch (const ParseError& e) {
      throw SchemaError(path, e.what());
    }
    if (s.field() == Field::QI && field == Field::Q) throw SchemaError(path, "imaginary part in a field Q document");
    return s;
  }

  Tensor vector(const std::string& key) const {
    const json& a = at(key);
    const std::string p = "/" + key;
    if (!a.is_array()) throw SchemaError(p, "expected an array");
    if (int(a.size()) != n) throw SchemaError(p, "expected " + std::to_string(n) + " coordinates");
    TensorBuilder b(1, n);
    for (int i = 0; i < n; ++i) b.add(Key(i), scalar(a[std::size_t(i)], p + "/" + std::to_string(i)));
    return b.build();
  }

  // Sparse entries with `arity` indices each; returns one tensor of that rank.
  Tensor sparse(const std::string& key, int arity) const {
    const json& a = at(key);
    const std::string p = "/" + key;
    if (!a.is_array()) throw SchemaError(p, "expected an array");
    KeyCodec kc(arity, n);
    std::set<Key> seen;
    TensorBuilder b(arity, n);
    std::vector<int> idx(static_cast<std::size_t>(arity));
    for (std::size_t e = 0; e < a.size(); ++e) {
      const std::string pe = p + "/" + std::to_string(e);
      const json& row = a[e];
      if (!row.is_array() || int(row.size()) != arity + 1)
        throw SchemaError(pe, "expected " + std::to_string(arity) + " indices and a scalar");
      for (int l = 0; l < arity; ++l) {
        const json& v = row[std::size_t(l)];
        if (!v.is_number_integer() || v.get<long long>() < 0 || v.get<long long>() >= n)
          throw SchemaError(pe + "/" + std::to_string(l), "index out of range");
        idx[std::size_t(l)] = v.get<int>();
      }
      const Key k = kc.pack(idx);
      if (!seen.insert(k).second) throw SchemaError(pe, "duplicate entry");
      b.add(k, scalar(row[std::size_t(arity)], pe + "/" + std::to_string(arity)));
    }
    return b.build();
  }
};

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IOError", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ordered_json to_document(const QhaPresentation& H) {
  ordered_json d;
  d["name"] = H.name;
  d["field"] = field_name(H.field);
  d["dim"] = H.dim;
  d["basis"] = H.basis;
  d["unit"] = coords(H.unit);
  d["counit"] = coords(H.counit);
  d["alpha"] = coords(H.alpha);
  d["beta"] = coords(H.beta);
  ordered_json m = ordered_json::array();
  for (int i = 0; i < H.dim; ++i)
    for (int j = 0; j < H.dim; ++j) push_entries(m, {i, j}, H.mult.at(i, j));
  d["mult"] = std::move(m);
  d["coproduct"] = columns(H.coproduct);
  d["phi"] = entries(H.phi);
  d["phi_inv"] = entries(H.phi_inv);
  d["antipode"] = columns(H.antipode);
  return d;
}

QhaPresentation from_document_raw(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  for (const auto& [k, v] : doc.items())
    if (std::find(std::begin(kKeys), std::end(kKeys), k) == std::end(kKeys))
      throw SchemaError("/" + k, "unknown member");
  Reader r{doc};
  const json& name = r.at("name");
  if (!name.is_string()) throw SchemaError("/name", "expected a string");
  const json& field = r.at("field");
  if (!field.is_string() || (field != "Q" && field != "Q(i)")) throw SchemaError("/field", "expected \"Q\" or \"Q(i)\"");
  r.field = field_from_name(field.get<std::string>());
  const json& dim = r.at("dim");
  if (!dim.is_number_integer() || dim.get<long long>() < 1 || dim.get<long long>() > 4096)
    throw SchemaError("/dim", "expected a positive integer");
  r.n = dim.get<int>();
  const json& basis = r.at("basis");
  if (!basis.is_array() || int(basis.size()) != r.n)
    throw SchemaError("/basis", "expected " + std::to_string(r.n) + " labels");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!basis[i].is_string()) throw SchemaError("/basis/" + std::to_string(i), "expected a string");
    if (!labels.insert(basis[i].get<std::string>()).second)
      throw SchemaError("/basis/" + std::to_string(i), "duplicate label");
  }

  QhaPresentation H;
  H.name = name.get<std::string>();
  H.field = r.field;
  H.dim = r.n;
  H.basis = basis.get<std::vector<std::string>>();
  H.unit = r.vector("unit");
  H.counit = Functional(r.vector("counit").dense());
  H.alpha = r.vector("alpha");
  H.beta = r.vector("beta");

  const Tensor m = r.sparse("mult", 3);
  H.mult = MultTable(r.n);
  {
    std::vector<TensorBuilder> cells;
    cells.reserve(std::size_t(r.n) * std::size_t(r.n));
    for (int i = 0; i < r.n * r.n; ++i) cells.emplace_back(1, r.n);
    const Key nn = Key(r.n);
    for (const auto& [k, c] : m.terms()) cells[k / nn].add(k % nn, c);
    for (int i = 0; i < r.n; ++i)
      for (int j = 0; j < r.n; ++j) H.mult.set(i, j, cells[std::size_t(i) * std::size_t(r.n) + std::size_t(j)].build());
  }
  auto op = [&](const std::string& key, int dst_rank) {
    const Tensor t = r.sparse(key, dst_rank + 1);
    LinearOperator L(1, dst_rank, r.n);
    const Key w = t.codec().weight(0);
    std::vector<TensorBuilder> cols;
    for (int i = 0; i < r.n; ++i) cols.emplace_back(dst_rank, r.n);
    for (const auto& [k, c] : t.terms()) cols[k / w].add(k % w, c);
    for (int i = 0; i < r.n; ++i) L.set_column(Key(i), cols[std::size_t(i)].build());
    return L;
  };
  H.coproduct = op("coproduct", 2);
  H.phi = r.sparse("phi", 3);
  H.phi_inv = r.sparse("phi_inv", 3);
  H.antipode = op("antipode", 1);
  return H;
}

QhaPresentation from_document(const json& doc) { return load_and_validate(from_document_raw(doc)); }

std::string export_text(const QhaPresentation& H) {
  // Members two-space indented; each coordinate list on one line, each sparse entry on its own line.
  const ordered_json d = to_document(H);
  std::string s = "{\n";
  bool first = true;
  for (const auto& [k, v] : d.items()) {
    if (!first) s += ",\n";
    first = false;
    s += "  " + ordered_json(k).dump() + ": ";
    const bool entry_list = v.is_array() && !v.empty() && v.front().is_array();
    if (!entry_list) {
      s += v.dump();
      continue;
    }
    s += "[\n";
    for (std::size_t i = 0; i < v.size(); ++i) s += "    " + v[i].dump() + (i + 1 < v.size() ? ",\n" : "\n");
    s += "  ]";
  }
  return s + "\n}\n";
}

namespace {

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

QhaPresentation import_text(const std::string& text) { return from_document(parse_text(text)); }

QhaPresentation import_file(const std::string& path) { return import_text(read_all(path)); }

QhaPresentation import_file_raw(const std::string& path) { return from_document_raw(parse_text(read_all(path))); }

void export_file(const QhaPresentation& H, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("IOError", "cannot write " + path);
  out << export_text(H);
  if (!out) throw Error("IOError", "write failed for " + path);
}

QhaPresentation load_source(const std::string& source) {
  const std::string prefix = "catalog:";
  if (source.rfind(prefix, 0) == 0) return catalog_build(source.substr(prefix.size()));
  return import_file(source);
}

// ---- reports ----------------------------------------------------------------

namespace {

std::string residual_text(const ReportRow& r) {
  if (r.pass) return "zero";
  return "nonzero(" + (r.witness ? r.witness->str() : std::string("false")) + ")";
}

}  // namespace

ordered_json report_json(const std::string& algebra, const VerificationReport& rep) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : rep.rows) {
    ordered_json o;
    o["suite"] = r.suite;
    o["name"] = r.name;
    o["status"] = r.pass ? "pass" : "fail";
    o["residual"] = r.pass ? "zero" : "nonzero";
    if (r.pass || !r.witness)
      o["witness"] = nullptr;
    else
      o["witness"] = r.witness->str();
    o["note"] = r.note;
    rows.push_back(std::move(o));
  }
  ordered_json d;
  d["algebra"] = algebra;
  d["rows"] = std::move(rows);
  d["summary"] = {{"rows", rep.rows.size()}, {"failures", rep.failures()}, {"pass", rep.all_pass()}};
  return d;
}

std::string report_text(const std::string& algebra, const VerificationReport& rep) {
  std::string s;
  for (const auto& r : rep.rows) {
    s += r.pass ? "PASS " : "FAIL ";
    s += r.suite + "/" + r.name + "  " + residual_text(r);
    if (!r.note.empty()) s += "  [" + r.note + "]";
    s += '\n';
  }
  s += algebra + ": " + std::to_string(rep.rows.size()) + " rows, " + std::to_string(rep.failures()) + " failing\n";
  return s;
}

}  // namespace qha
