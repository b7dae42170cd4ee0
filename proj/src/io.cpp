#include "ratioref/io.hpp"

#include <cstdlib>
#include <fstream>
#include <ostream>

namespace ratioref::io {

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}

template <>
double parse_scalar<double>(std::string_view text) {
  if (text.find('/') != std::string_view::npos) {
    const Rational r = parse_rational(text);
    return r.get_num().get_d() / r.get_den().get_d();
  }
  const std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ValidationError("not a number: '" + s + "'");
  return v;
}

template <>
Rational scalar_from_json<Rational>(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(mpz_class(j.dump(), 10));
  if (j.is_number_float())
    throw ValidationError("non-integer JSON number " + j.dump() + " needs --backend float (or quote it as \"p/q\")");
  throw ValidationError("expected a number, got " + j.dump());
}

template <>
double scalar_from_json<double>(const json& j) {
  if (j.is_string()) return parse_scalar<double>(j.get<std::string>());
  if (j.is_number()) return j.get<double>();
  throw ValidationError("expected a number, got " + j.dump());
}

namespace {

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw ValidationError(std::string("dictionary is missing \"") + name + "\"");
  return j.at(name);
}

template <class S>
Vector<S> scale_from_json(const json& j) {
  if (j.is_array()) {
    Vector<S> v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = scalar_from_json<S>(j[k]);
    return v;
  }
  Vector<S> v(1);
  v[0] = scalar_from_json<S>(j);
  return v;
}

Eigen::VectorXd reals_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("expected an array of numbers, got " + j.dump());
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v[static_cast<Eigen::Index>(k)] = scalar_from_json<double>(j[k]);
  return v;
}

template <class S>
json scalar_to_json(const S& v) {
  if constexpr (is_exact_v<S>)
    return to_string(v);
  else
    return v;
}

template <class S>
json scale_to_json(const Vector<S>& v) {
  if (v.size() == 1) return scalar_to_json(v[0]);
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(scalar_to_json(v[k]));
  return arr;
}

json reals_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v[k]);
  return arr;
}

}  // namespace

template <class S>
Dictionary<S> dictionary_from_json(const json& j) {
  const std::string variant = field(j, "variant").get<std::string>();
  if (variant == "finite") {
    std::vector<FiniteItem<S>> items;
    if (j.contains("items")) {
      for (const auto& item : j.at("items")) {
        std::string id = item.contains("id") ? item.at("id").get<std::string>() : "o" + std::to_string(items.size() + 1);
        items.push_back({std::move(id), scale_from_json<S>(field(item, "scale"))});
      }
    } else {
      for (const auto& s : field(j, "scales"))
        items.push_back({"o" + std::to_string(items.size() + 1), scale_from_json<S>(s)});
    }
    return FiniteDictionary<S>(std::move(items));
  }
  if (variant == "interval")
    return IntervalDictionary<S>(Scale<S>(scalar_from_json<S>(field(j, "lo"))), Scale<S>(scalar_from_json<S>(field(j, "hi"))));
  if (variant == "logbox") return LogBox(reals_from_json(field(j, "lo")), reals_from_json(field(j, "hi")));
  if (variant == "logpolytope") {
    const json& hs = field(j, "halfspaces");
    if (!hs.is_array() || hs.empty()) throw ValidationError("log-polytope needs a nonempty \"halfspaces\" array");
    const Eigen::Index d = static_cast<Eigen::Index>(field(hs[0], "normal").size());
    Eigen::MatrixXd normals(static_cast<Eigen::Index>(hs.size()), d);
    Eigen::VectorXd offsets(static_cast<Eigen::Index>(hs.size()));
    for (std::size_t i = 0; i < hs.size(); ++i) {
      const Eigen::VectorXd n = reals_from_json(field(hs[i], "normal"));
      if (n.size() != d) throw ValidationError("log-polytope normals have inconsistent dimensions");
      normals.row(static_cast<Eigen::Index>(i)) = n.transpose();
      offsets[static_cast<Eigen::Index>(i)] = scalar_from_json<double>(field(hs[i], "offset"));
    }
    return LogPolytope(std::move(normals), std::move(offsets));
  }
  throw ValidationError("unknown dictionary variant '" + variant + "'");
}

template <class S>
json dictionary_to_json(const Dictionary<S>& dict) {
  if (const auto* f = std::get_if<FiniteDictionary<S>>(&dict)) {
    json items = json::array();
    for (const auto& item : f->items()) items.push_back({{"id", item.id}, {"scale", scale_to_json<S>(item.scale)}});
    return {{"variant", "finite"}, {"items", items}};
  }
  if (const auto* iv = std::get_if<IntervalDictionary<S>>(&dict))
    return {{"variant", "interval"}, {"lo", scalar_to_json(iv->lo())}, {"hi", scalar_to_json(iv->hi())}};
  if (const auto* box = std::get_if<LogBox>(&dict))
    return {{"variant", "logbox"}, {"lo", reals_to_json(box->lo())}, {"hi", reals_to_json(box->hi())}};
  const auto& poly = std::get<LogPolytope>(dict);
  json hs = json::array();
  for (Eigen::Index i = 0; i < poly.normals().rows(); ++i)
    hs.push_back({{"normal", reals_to_json(poly.normals().row(i).transpose())}, {"offset", poly.offsets()[i]}});
  return {{"variant", "logpolytope"}, {"halfspaces", hs}};
}

template Dictionary<Rational> dictionary_from_json<Rational>(const json&);
template Dictionary<double> dictionary_from_json<double>(const json&);
template json dictionary_to_json<Rational>(const Dictionary<Rational>&);
template json dictionary_to_json<double>(const Dictionary<double>&);

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
}

namespace {

std::string cell_label(const Cell& c) {
  std::string out = std::to_string(c.index + 1);
  if (c.tie_with) out += "|" + std::to_string(*c.tie_with + 1);
  return out;
}

std::string margin_label(const Margin<double>& m) {
  if (m.is_finite()) return to_string(m.value);
  return m.is_infinite() ? "inf" : "";
}

}  // namespace

void write_sweep_csv(std::ostream& out, const FiniteDictionary<double>& dict, const std::vector<SweepRow>& rows) {
  out << "x,cell,margin";
  for (const auto& item : dict.items()) out << ',' << item.id;
  out << '\n';
  for (const auto& row : rows) {
    out << to_string(row.x) << ',' << cell_label(row.cell) << ',' << margin_label(row.margin);
    for (double c : row.costs) out << ',' << to_string(c);
    out << '\n';
  }
}

json sweep_to_json(const FiniteDictionary<double>& dict, const std::vector<SweepRow>& rows) {
  json ids = json::array();
  for (const auto& item : dict.items()) ids.push_back(item.id);
  json out_rows = json::array();
  for (const auto& row : rows)
    out_rows.push_back({{"x", row.x}, {"cell", cell_label(row.cell)}, {"margin", margin_to_json(row.margin)}, {"costs", row.costs}});
  return {{"ids", ids}, {"rows", out_rows}};
}

}  // namespace ratioref::io
