#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "algebra.hpp"
#include "diagram.hpp"
#include "pair.hpp"
#include "report.hpp"

namespace motzkin {

using Json = nlohmann::json;

namespace detail {

inline void write_json(const Json& j, std::string& out) {
  switch (j.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      // nlohmann::json keeps object keys in a std::map, so they come out sorted
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += Json(it.key()).dump();
        out += ':';
        write_json(it.value(), out);
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        write_json(j[i], out);
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.12e", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// Deterministic serialization: sorted keys, floats as %.12e, no whitespace.
inline std::string dump_json(const Json& j) {
  std::string out;
  detail::write_json(j, out);
  return out;
}

inline Json to_json(const MotzkinDiagram& d) { return {{"width", d.width()}, {"pairing", d.pairing()}}; }

inline Json to_json(const AlgebraElement& x) {
  Json terms = Json::array();
  for (const auto& [d, c] : x.terms()) terms.push_back({{"pairing", d.pairing()}, {"coeff", to_string(c)}});
  return {{"width", x.width()}, {"lambda", to_string(x.lambda())}, {"terms", terms}};
}

inline AlgebraElement element_from_json(const Json& j) {
  try {
    AlgebraElement x(j.at("width").get<int>(), parse_rational(j.at("lambda").get<std::string>()));
    for (const auto& t : j.at("terms"))
      x.add_term(MotzkinDiagram::from_pairing(t.at("pairing").get<std::vector<int>>()),
                 parse_rational(t.at("coeff").get<std::string>()));
    return x;
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed algebra element JSON: ") + e.what());
  }
}

inline Json to_json(const MotzkinPair& p) {
  auto list = [](const std::vector<Complex>& v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(Json::array({z.real(), z.imag()}));
    return out;
  };
  return {{"n", p.n}, {"lambda", to_string(p.lambda)}, {"a", list(p.a)}, {"b", list(p.b)}};
}

inline MotzkinPair pair_from_json(const Json& j) {
  try {
    MotzkinPair p;
    p.n = j.at("n").get<int>();
    p.lambda = parse_rational(j.at("lambda").get<std::string>());
    for (const auto& z : j.at("a")) p.a.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    for (const auto& z : j.at("b")) p.b.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    if (static_cast<int>(p.a.size()) != p.n || static_cast<int>(p.b.size()) != p.n)
      throw ParameterError("pair JSON: a and b need n entries");
    return p;
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("malformed pair JSON: ") + e.what());
  }
}

inline MotzkinPair read_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open pair file '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParameterError("pair file '" + path + "' is not valid JSON: " + e.what());
  }
  return pair_from_json(j);
}

inline Json to_json(const Report& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"residual", c.residual},
                      {"tolerance", c.tolerance},
                      {"detail", c.detail}});
  return {{"title", r.title}, {"passed", r.passed()}, {"checks", checks}};
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", x);
  return buf;
}

inline std::string to_csv(const Report& r) {
  std::ostringstream s;
  s << "name,passed,residual,tolerance\n";
  for (const auto& c : r.checks)
    s << csv_field(c.name) << ',' << (c.passed ? "true" : "false") << ',' << format_double(c.residual) << ','
      << format_double(c.tolerance) << '\n';
  return s.str();
}

}  // namespace motzkin
