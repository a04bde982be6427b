#include "nagata/json_io.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace nagata {

Field field_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw std::invalid_argument("field spec must be an object with a type");
  std::string t = j.at("type").get<std::string>();
  FieldSpec s;
  if (t == "rational") {
    s.kind = FieldKind::rational;
  } else if (t == "prime") {
    s.kind = FieldKind::prime;
    s.p = j.at("p").get<std::uint64_t>();
  } else if (t == "ext") {
    s.kind = FieldKind::extension;
    s.p = j.at("p").get<std::uint64_t>();
    s.degree = j.at("deg").get<unsigned>();
    if (j.contains("modulus")) s.modulus = j.at("modulus").get<std::vector<std::uint64_t>>();
  } else {
    throw std::invalid_argument("unknown field type '" + t + "'");
  }
  return make_field(s);
}

json field_to_json(const Field& f) {
  switch (f->kind()) {
    case FieldKind::rational:
      return json{{"type", "rational"}};
    case FieldKind::prime:
      return json{{"type", "prime"}, {"p", f->characteristic()}};
    case FieldKind::extension:
      return json{{"type", "ext"}, {"p", f->characteristic()}, {"deg", f->degree()}, {"modulus", f->modulus()}};
  }
  return json();
}

Elem elem_from_json(const Field& f, const json& j) {
  if (j.is_number_integer()) return f->from_int(j.get<std::int64_t>());
  if (j.is_array()) {
    std::vector<std::int64_t> c;
    for (auto& x : j) {
      if (!x.is_number_integer()) throw std::invalid_argument("coefficient arrays must hold integers");
      c.push_back(x.get<std::int64_t>());
    }
    return f->from_coeffs(c);
  }
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    bool plain = !s.empty();
    for (char ch : s) plain = plain && (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/' || ch == '+' || ch == ' ');
    if (plain) {
      try {
        return f->parse(s);
      } catch (const std::invalid_argument&) {
      }
    }
    MPoly c = parse_mpoly(f, {}, s);
    if (c.total_degree() > 0) throw std::invalid_argument("field element expected: " + s);
    return c.coeff({});
  }
  throw std::invalid_argument("cannot read field element from " + j.dump());
}

json elem_to_json(const Elem& x) {
  const FieldCtx* f = x.field();
  if (f->kind() == FieldKind::extension) {
    json a = json::array();
    for (auto c : x.coeffs()) a.push_back(c);
    return a;
  }
  return x.to_string();
}

PointConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  Field f = field_from_json(j.at("field"));
  std::size_t r = j.at("r").get<std::size_t>();
  std::vector<std::vector<Elem>> pts;
  for (auto& p : j.at("points")) {
    std::vector<Elem> v;
    for (auto& x : p) v.push_back(elem_from_json(f, x));
    pts.push_back(v);
  }
  return PointConfig::create(f, r, pts);
}

json config_to_json(const PointConfig& cfg) {
  json pts = json::array();
  for (std::size_t j = 0; j < cfg.n(); ++j) {
    json p = json::array();
    for (auto& x : cfg.point(j)) p.push_back(elem_to_json(x));
    pts.push_back(p);
  }
  return json{{"field", field_to_json(cfg.field())}, {"r", cfg.r()}, {"points", pts}};
}

Matrix matrix_from_json(const Field& f, const json& rows) {
  std::vector<std::vector<Elem>> m;
  for (auto& r : rows) {
    std::vector<Elem> v;
    for (auto& x : r) v.push_back(elem_from_json(f, x));
    m.push_back(v);
  }
  return Matrix::from_rows(f, m);
}

Matrix representation_matrix_from_json(const json& j) {
  Field f = field_from_json(j.at("field"));
  Matrix m(f, 0, 0);
  if (j.contains("point_matrix")) {
    m = matrix_from_json(f, j.at("point_matrix"));
  } else {
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.empty()) throw std::invalid_argument("points must be a non-empty array");
    std::size_t r = pts[0].size();
    m = Matrix(f, r, pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i].size() != r) throw std::invalid_argument("points have different lengths");
      for (std::size_t k = 0; k < r; ++k) m(k, i) = elem_from_json(f, pts[i][k]);
    }
  }
  if (!j.contains("representation_order")) return m;
  std::vector<std::size_t> idx;
  std::vector<bool> seen(m.cols(), false);
  for (auto& x : j.at("representation_order")) {
    std::size_t i = x.get<std::size_t>();
    if (i < 1 || i > m.cols() || seen[i - 1]) throw std::invalid_argument("representation_order is not a permutation");
    seen[i - 1] = true;
    idx.push_back(i - 1);
  }
  if (idx.size() != m.cols()) throw std::invalid_argument("representation_order is not a permutation");
  return m.select_columns(idx);
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) r.push_back(elem_to_json(m(i, k)));
    rows.push_back(r);
  }
  return rows;
}

MPoly form_from_json(const Field& f, unsigned nvars, const json& j) {
  if (j.is_string()) return parse_mpoly(f, default_var_names(nvars), j.get<std::string>());
  if (!j.is_array()) throw std::invalid_argument("form must be a string or a list of terms");
  MPoly g(f, nvars);
  for (auto& t : j) {
    if (!t.is_array() || t.size() != 2) throw std::invalid_argument("term must be [exponents, coefficient]");
    auto e = t[0].get<std::vector<int>>();
    if (e.size() != nvars) throw std::invalid_argument("exponent vector has wrong length");
    g.add_term(e, elem_from_json(f, t[1]));
  }
  return g;
}

json form_to_json(const MPoly& g) {
  json terms = json::array();
  for (auto it = g.terms().rbegin(); it != g.terms().rend(); ++it) terms.push_back(json::array({it->first, elem_to_json(it->second)}));
  return terms;
}

FormSystem system_from_json(const Field& f, const json& j) {
  unsigned n = j.contains("nvars") ? j.at("nvars").get<unsigned>() : j.at("r").get<unsigned>();
  std::vector<MPoly> basis;
  for (auto& g : j.at("forms")) basis.push_back(form_from_json(f, n, g));
  if (basis.empty()) throw std::invalid_argument("system has no forms");
  int d = basis[0].total_degree();
  if (j.contains("degree") && j.at("degree").get<int>() != d) throw std::invalid_argument("degree mismatch");
  return FormSystem(f, n, static_cast<unsigned>(d), basis);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
  }
}

std::string default_data_dir() {
  if (const char* env = std::getenv("NAGATA_DATA")) return env;
#ifdef NAGATA_DATA_DIR
  return NAGATA_DATA_DIR;
#else
  return "data";
#endif
}

json load_dataset(const std::string& name, const std::string& data_dir) {
  std::string dir = data_dir.empty() ? default_data_dir() : data_dir;
  std::string file = name;
  if (file.size() < 5 || file.substr(file.size() - 5) != ".json") file += ".json";
  return read_json_file(dir + "/" + file);
}

}  // namespace nagata
