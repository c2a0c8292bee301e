#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "fide/problem.hpp"

// Problem documents and atomic file output. Document format:
//   {
//     "alpha": [a, b], "beta": [a, b], "T": 1.0, "lambda": 1.0,
//     "init": [y0, ...],
//     "f": [[mu, theta, value], ...],
//     "g": [[mu, nu, theta, value], ...],
//     "exact": {"builtin": "example3"} | {"series": {"b": 6, "coef": [[mu, value], ...]}} | null
//   }

namespace fide::io {

using nlohmann::json;

inline json problem_to_json(const ProblemSpec& p) {
  json j;
  j["alpha"] = {p.alpha.num, p.alpha.den};
  j["beta"] = {p.beta.num, p.beta.den};
  j["T"] = p.T;
  j["lambda"] = p.lambda;
  j["init"] = p.init;
  j["f"] = json::array();
  for (const auto& e : p.f) j["f"].push_back({e.mu, e.theta, e.value});
  j["g"] = json::array();
  for (const auto& e : p.g) j["g"].push_back({e.mu, e.nu, e.theta, e.value});
  if (!p.exact.builtin_name.empty()) {
    j["exact"] = {{"builtin", p.exact.builtin_name}};
  } else if (p.exact.literal) {
    json coef = json::array();
    for (int mu = 0; mu <= p.exact.literal->order(); ++mu)
      if (p.exact.literal->coef[mu] != 0.0) coef.push_back({mu, p.exact.literal->coef[mu]});
    j["exact"] = {{"series", {{"b", p.exact.literal->b}, {"coef", coef}}}};
  } else {
    j["exact"] = nullptr;
  }
  return j;
}

inline ProblemSpec problem_from_json(const json& j, std::vector<std::string>* warnings = nullptr) {
  auto fail = [](const std::string& m) -> void { throw validation_error("problem document: " + m); };
  auto warn = [&](const std::string& m) {
    if (warnings) warnings->push_back(m);
  };
  ProblemSpec p;
  try {
    auto order_of = [&](const char* field) {
      const auto& a = j.at(field);
      if (!a.is_array() || a.size() != 2) fail(std::string(field) + ": expected [num, den]");
      RationalOrder r(a[0].get<long>(), a[1].get<long>());
      if (!r.reduced()) {
        RationalOrder red = r.reduce();
        warn(std::string(field) + ": reduced " + std::to_string(r.num) + "/" +
             std::to_string(r.den) + " to " + std::to_string(red.num) + "/" +
             std::to_string(red.den));
        return red;
      }
      return r;
    };
    p.alpha = order_of("alpha");
    p.beta = order_of("beta");
    p.T = j.at("T").get<double>();
    p.lambda = j.at("lambda").get<double>();
    p.init = j.at("init").get<std::vector<double>>();
    for (const auto& e : j.at("f")) {
      if (!e.is_array() || e.size() != 3) fail("f: expected entries [mu, theta, value]");
      p.f.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    for (const auto& e : j.at("g")) {
      if (!e.is_array() || e.size() != 4) fail("g: expected entries [mu, nu, theta, value]");
      p.g.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<int>(), e[3].get<double>()});
    }
    if (j.contains("exact") && !j.at("exact").is_null()) {
      const auto& ex = j.at("exact");
      if (ex.contains("builtin")) {
        std::string name = ex.at("builtin").get<std::string>();
        p.exact = builtin(name).exact;
      } else if (ex.contains("series")) {
        const auto& sd = ex.at("series");
        int sb = sd.at("b").get<int>();
        int maxmu = 0;
        for (const auto& c : sd.at("coef")) maxmu = std::max(maxmu, c[0].get<int>());
        auto s = std::make_shared<series::FracSeries>(series::FracSeries::zero(sb, maxmu));
        for (const auto& c : sd.at("coef")) s->coef[c[0].get<int>()] = c[1].get<double>();
        p.exact.literal = s;
        p.exact.eval = [s](double t) { return series::series_eval(*s, t); };
        p.exact.make_series = [s](int M) {
          auto r = series::FracSeries::zero(s->b, M);
          for (int mu = 0; mu <= std::min(M, s->order()); ++mu) r.coef[mu] = s->coef[mu];
          return r;
        };
      } else {
        fail("exact: expected {builtin}, {series} or null");
      }
    }
  } catch (const validation_error&) {
    throw;
  } catch (const std::exception& e) {
    throw validation_error(std::string("problem document: ") + e.what());
  }
  p.require_valid();
  if (p.exact.literal && p.exact.literal->b != p.b())
    throw validation_error("problem document: exact.series.b does not match the problem grid");
  return p;
}

inline ProblemSpec load_problem_file(const std::filesystem::path& path,
                                     std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open problem file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw validation_error("problem document: parse failure: " + std::string(e.what()));
  }
  return problem_from_json(j, warnings);
}

inline void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

inline void write_json_atomic(const std::filesystem::path& path, const json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace fide::io
